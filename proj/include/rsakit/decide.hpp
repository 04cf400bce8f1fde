// decide.hpp -- emptiness, witnesses and inclusion checking
#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "rsakit/core.hpp"
#include "rsakit/determinise.hpp"

namespace rsakit {

struct Verdict {
    bool answer = false;
    /// Nonemptiness: a member.  Inclusion: a word of the left side outside the
    /// right side.
    std::optional<DataWord> witness;
};

struct DecideOptions {
    bool want_witness = true;
    std::size_t max_basis = 1000000;
    std::size_t forward_depth = 64;
    std::size_t max_macrostates = 100000;
    const CancelToken* cancel = nullptr;
};

/// answer == true iff the language is empty.
Verdict is_empty(const Rsa& a, const DecideOptions& opts = {});

/// Boolean combination of one-register, equality-only NRAs.
struct IncExpr {
    enum class Kind { leaf, union_of, intersection, complement };
    Kind kind = Kind::leaf;
    std::shared_ptr<const Nra> leaf;
    std::vector<std::shared_ptr<const IncExpr>> args;

    static std::shared_ptr<const IncExpr> make_leaf(Nra a);
    static std::shared_ptr<const IncExpr> make_union(std::shared_ptr<const IncExpr> a,
                                                     std::shared_ptr<const IncExpr> b);
    static std::shared_ptr<const IncExpr> make_intersection(std::shared_ptr<const IncExpr> a,
                                                            std::shared_ptr<const IncExpr> b);
    static std::shared_ptr<const IncExpr> make_complement(std::shared_ptr<const IncExpr> a);
};

/// Problems that put a leaf outside the one-register equality fragment.
std::vector<std::string> fragment_violations(const Nra& a);

/// Letters mentioned anywhere in the expression, in first-seen order.
std::vector<std::string> expr_letters(const IncExpr& e);

/// Structural membership: leaves by NRA simulation, operators Booleanly.
bool expr_membership(const IncExpr& e, const DataWord& w, const std::vector<std::string>& word_letters);

/// Deterministic RsA for the expression over `letters` (which must include the
/// expression's letters; pass {} to use exactly those).
Rsa compile_expr(const IncExpr& e, const std::vector<std::string>& letters = {},
                 const DecideOptions& opts = {});

/// answer == true iff L(a) is contained in L(e).
Verdict check_inclusion(const Rsa& a, const IncExpr& e, const DecideOptions& opts = {});

}  // namespace rsakit
