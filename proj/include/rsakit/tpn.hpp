// tpn.hpp -- transfer Petri nets and coverability
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rsakit/errors.hpp"

namespace rsakit {

using PlaceId = std::uint32_t;
using Count = std::uint32_t;

/// Token count per place, indexed by place id.
using Marking = std::vector<Count>;

struct TpnTransition {
    std::string name;
    Marking in;                     // F
    Marking out;                    // H
    std::vector<PlaceId> transfer;  // delta, total over the places
};

struct Tpn {
    std::string name = "N";
    std::vector<std::string> places;
    std::vector<TpnTransition> transitions;
    Marking initial;
    /// Groups of places whose total token count never exceeds one in any
    /// reachable marking.  Purely an optimisation hint for the backward search;
    /// ignored when the initial marking violates it.
    std::vector<std::vector<PlaceId>> bounded_groups;

    std::size_t num_places() const { return places.size(); }
};

std::vector<std::string> validate(const Tpn& net);

/// Identity transfer, empty F and H.
TpnTransition make_tpn_transition(const Tpn& net, std::string name);

Marking zero_marking(const Tpn& net);
bool leq(const Marking& a, const Marking& b);

std::optional<Marking> fire(const Tpn& net, const Marking& m, const TpnTransition& t);

/// Minimal markings from which firing `t` yields a marking covering `target`.
std::vector<Marking> min_pre_basis(const Tpn& net, const TpnTransition& t, const Marking& target);

/// Minimal elements, deduplicated, in a canonical (sorted) order.
std::vector<Marking> minimize_basis(std::vector<Marking> ms);

struct CoverOptions {
    std::size_t max_basis = 1000000;
    const CancelToken* cancel = nullptr;
};

bool is_coverable(const Tpn& net, const Marking& target, const CoverOptions& opts = {});

/// Breadth-first search over markings with per-place counts clamped at
/// `token_cap`.  Returns transition indices of a firing sequence whose final
/// marking covers `target`.
std::optional<std::vector<std::size_t>> forward_cover_search(const Tpn& net, const Marking& target,
                                                             std::size_t max_depth, Count token_cap,
                                                             const CancelToken* cancel = nullptr);

std::string to_string(const Tpn& net, const Marking& m);

}  // namespace rsakit
