// reduction.hpp -- RsA emptiness <-> transfer Petri net coverability
#pragma once

#include <map>
#include <vector>

#include "rsakit/core.hpp"
#include "rsakit/tpn.hpp"

namespace rsakit {

/// A cell of the Venn diagram of the registers: the data held by exactly the
/// registers of the set.  The empty set is the outside cell.
using Region = RegSet;

// Transfer computation ---------------------------------------------------------

/// {up(r) restricted to registers | r in rho}
std::vector<RegSet> posit_product(const std::vector<RsaUpdate>& up, Region rho);
/// union of up(r) restricted to registers, over r outside rho
RegSet negat(const std::vector<RsaUpdate>& up, Region rho);
/// Unordered Cartesian product: every union obtained by picking one register
/// from each member.  The product of no sets is {{}}.
std::vector<RegSet> unordered_product(const std::vector<RegSet>& sets);
std::vector<Region> posit_sop(const std::vector<RsaUpdate>& up, Region rho);
/// Regions whose data land exactly in `rho` after the update: those avoiding
/// negat(rho) that meet every member of posit_product(rho).
std::vector<Region> posit_sop_prime(const std::vector<RsaUpdate>& up, Region rho);

/// Image of one region under the update.
Region transfer_region(const std::vector<RsaUpdate>& up, Region rho);
/// Full transfer table indexed by region, built from posit_sop_prime.
std::vector<Region> compute_transfer(const std::vector<RsaUpdate>& up);

std::string region_name(const std::vector<std::string>& registers, Region rho);

// RsA -> TPN ------------------------------------------------------------------

struct TpnStep {
    enum class Kind { start, step, accept };
    Kind kind = Kind::step;
    StateId state = 0;              // start: initial state entered; accept: final state left
    std::size_t rsa_transition = 0;  // step
    Region region = 0;               // step: region of the input datum before the step
    bool fresh = false;              // step: the input datum is new
};

struct RsaTpnMap {
    std::vector<PlaceId> state_place;
    PlaceId init = 0;
    PlaceId fin = 0;
    std::map<Region, PlaceId> region_place;
    std::vector<TpnStep> transition_of;  // indexed like net.transitions
};

struct RsaTpn {
    Tpn net;
    Marking target;
    RsaTpnMap map;
};

struct ReductionOptions {
    /// Only create places for regions that a forward over-approximation finds
    /// possibly nonempty; otherwise every subset of the registers gets a place.
    bool prune_regions = false;
    std::size_t max_region_registers = 16;
};

RsaTpn rsa_to_tpn(const Rsa& a, const ReductionOptions& opts = {});

/// Marking of the net that corresponds to an RsA configuration.
Marking config_marking(const Rsa& a, const RsaTpn& red, const RsaConfig& cfg);

// TPN -> RsA ------------------------------------------------------------------

/// RsA over the single letter "a" that is nonempty iff `target` is coverable.
Rsa tpn_to_rsa(const Tpn& net, const Marking& target);

}  // namespace rsakit
