// format.hpp -- text formats for automata, transfer nets and data words
//
//   nra NAME { alphabet a b ; registers r1 r2 ; states q0 q1 ; init q0 ; final q1 ;
//              q0 -a-> q1 [ eq r1, neq r2 | r1 := in, r2 := bot ] ; }
//   rsa NAME { ... q0 -a-> q1 [ in r1, notin r2, empty r3 | r1 := r1 + in, r2 := {} ] ; }
//   tpn NAME { places p1 p2 ; init p1:1 ; t1 : in p1:1 ; out p2:2 ; transfer p1->p2 ;
//              target p2:1 ; }
//
// Names are bare when made of [A-Za-z0-9_.#'] and not reserved, otherwise
// double-quoted; `//` starts a line comment.  The `states` declaration is
// optional on input and always printed.  Registers without an update keep their value.
#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>

#include "rsakit/algebra.hpp"
#include "rsakit/core.hpp"
#include "rsakit/tpn.hpp"

namespace rsakit {

/// Syntax error with a 1-based line and column.
class ParseError : public InputError {
public:
    ParseError(const std::string& what, std::size_t line, std::size_t column);
    std::size_t line;
    std::size_t column;
};

using AnyAutomaton = std::variant<Nra, Rsa, RsaWithEmptyTest>;

/// An `rsa` file yields RsaWithEmptyTest exactly when some transition uses an
/// `empty` guard.  Validation problems are reported as InputError.
AnyAutomaton parse_automaton(const std::string& text);
Nra parse_nra(const std::string& text);
Rsa parse_rsa(const std::string& text);

std::string print_automaton(const Nra& a);
std::string print_automaton(const Rsa& a);
std::string print_automaton(const RsaWithEmptyTest& a);
std::string print_automaton(const AnyAutomaton& a);

struct TpnFile {
    Tpn net;
    std::optional<Marking> target;
};

TpnFile parse_tpn(const std::string& text);
std::string print_tpn(const Tpn& net, const std::optional<Marking>& target = std::nullopt);
/// `p1:1 p2:3`; unlisted places get zero.
Marking parse_marking(const Tpn& net, const std::string& text);

/// Interns non-numeric data values.  Numeric literals stand for themselves;
/// strings receive values from the top half of the range.
class DataTable {
public:
    Datum intern(const std::string& s);
    std::optional<std::string> name_of(Datum d) const;

private:
    std::map<std::string, Datum> ids_;
    std::map<Datum, std::string> names_;
};

/// Space separated `letter:datum` tokens over the given alphabet.
DataWord parse_word(const std::string& text, const std::vector<std::string>& letters, DataTable& table);
std::string print_word(const DataWord& w, const std::vector<std::string>& letters,
                       const DataTable* table = nullptr);

std::string quote_name(const std::string& name);

}  // namespace rsakit
