// tpn.cpp -- firing rule, backward coverability and bounded forward search
#include "rsakit/tpn.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>
#include <set>

namespace rsakit {

std::vector<std::string> validate(const Tpn& net) {
    std::vector<std::string> issues;
    const std::size_t n = net.num_places();
    if (net.initial.size() != n) {
        issues.push_back("initial marking does not cover every place");
    }
    for (const TpnTransition& t : net.transitions) {
        if (t.in.size() != n || t.out.size() != n || t.transfer.size() != n) {
            issues.push_back("transition '" + t.name + "': maps are not total over the places");
            continue;
        }
        for (PlaceId p : t.transfer) {
            if (p >= n) {
                issues.push_back("transition '" + t.name + "': transfer targets an unknown place");
                break;
            }
        }
        if (std::find(net.places.begin(), net.places.end(), t.name) != net.places.end()) {
            issues.push_back("transition '" + t.name + "' shares its name with a place");
        }
    }
    for (const auto& group : net.bounded_groups) {
        for (PlaceId p : group) {
            if (p >= n) {
                issues.push_back("bounded group names an unknown place");
            }
        }
    }
    return issues;
}

TpnTransition make_tpn_transition(const Tpn& net, std::string name) {
    TpnTransition t;
    t.name = std::move(name);
    t.in.assign(net.num_places(), 0);
    t.out.assign(net.num_places(), 0);
    t.transfer.resize(net.num_places());
    std::iota(t.transfer.begin(), t.transfer.end(), PlaceId{0});
    return t;
}

Marking zero_marking(const Tpn& net) { return Marking(net.num_places(), 0); }

bool leq(const Marking& a, const Marking& b) {
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] > b[i]) {
            return false;
        }
    }
    return true;
}

std::optional<Marking> fire(const Tpn& net, const Marking& m, const TpnTransition& t) {
    const std::size_t n = net.num_places();
    if (!leq(t.in, m)) {
        return std::nullopt;
    }
    Marking next = t.out;
    for (std::size_t p = 0; p < n; ++p) {
        next[t.transfer[p]] += m[p] - t.in[p];
    }
    return next;
}

namespace {

/// All ways of writing `total` as an ordered sum over `k` parts.
void compositions(Count total, std::size_t k, std::vector<Count>& cur,
                  std::vector<std::vector<Count>>& out) {
    if (cur.size() + 1 == k) {
        cur.push_back(total);
        out.push_back(cur);
        cur.pop_back();
        return;
    }
    for (Count v = 0; v <= total; ++v) {
        cur.push_back(v);
        compositions(total - v, k, cur, out);
        cur.pop_back();
    }
}

constexpr std::size_t kMaxPreCandidates = 2000000;

}  // namespace

std::vector<Marking> min_pre_basis(const Tpn& net, const TpnTransition& t, const Marking& target) {
    const std::size_t n = net.num_places();
    std::vector<std::vector<PlaceId>> preimage(n);
    for (PlaceId p = 0; p < n; ++p) {
        preimage[t.transfer[p]].push_back(p);
    }
    // Each place contributes independently: its deficit must be supplied by
    // the tokens left in its transfer preimage after F has been consumed.
    std::vector<std::pair<const std::vector<PlaceId>*, std::vector<std::vector<Count>>>> choices;
    std::size_t combos = 1;
    for (PlaceId p = 0; p < n; ++p) {
        const Count deficit = target[p] > t.out[p] ? target[p] - t.out[p] : 0;
        if (deficit == 0) {
            continue;
        }
        if (preimage[p].empty()) {
            return {};
        }
        std::vector<std::vector<Count>> comps;
        std::vector<Count> cur;
        compositions(deficit, preimage[p].size(), cur, comps);
        combos *= comps.size();
        if (combos > kMaxPreCandidates) {
            throw ResourceError("predecessor basis enumeration too large");
        }
        choices.emplace_back(&preimage[p], std::move(comps));
    }
    std::vector<Marking> out;
    std::vector<std::size_t> pos(choices.size(), 0);
    for (std::size_t k = 0; k < combos; ++k) {
        Marking m = t.in;
        for (std::size_t j = 0; j < choices.size(); ++j) {
            const auto& places = *choices[j].first;
            const auto& comp = choices[j].second[pos[j]];
            for (std::size_t i = 0; i < places.size(); ++i) {
                m[places[i]] += comp[i];
            }
        }
        out.push_back(std::move(m));
        for (std::size_t j = 0; j < choices.size(); ++j) {
            if (++pos[j] < choices[j].second.size()) {
                break;
            }
            pos[j] = 0;
        }
    }
    return minimize_basis(std::move(out));
}

std::vector<Marking> minimize_basis(std::vector<Marking> ms) {
    std::sort(ms.begin(), ms.end());
    ms.erase(std::unique(ms.begin(), ms.end()), ms.end());
    std::vector<Marking> out;
    for (std::size_t i = 0; i < ms.size(); ++i) {
        bool dominated = false;
        for (std::size_t j = 0; j < ms.size() && !dominated; ++j) {
            dominated = j != i && leq(ms[j], ms[i]);
        }
        if (!dominated) {
            out.push_back(ms[i]);
        }
    }
    return out;
}

bool is_coverable(const Tpn& net, const Marking& target, const CoverOptions& opts) {
    if (!validate(net).empty()) {
        throw InputError("invalid net: " + validate(net).front());
    }
    if (target.size() != net.num_places()) {
        throw InputError("target marking does not match the places of the net");
    }
    if (leq(target, net.initial)) {
        return true;
    }
    auto within_groups = [&](const Marking& m) {
        for (const auto& group : net.bounded_groups) {
            Count total = 0;
            for (PlaceId p : group) {
                total += m[p];
            }
            if (total > 1) {
                return false;
            }
        }
        return true;
    };
    const bool use_groups = within_groups(net.initial);

    std::vector<Marking> basis{target};
    std::vector<bool> alive{true};
    std::deque<std::size_t> work{0};
    std::size_t live = 1;
    while (!work.empty()) {
        poll(opts.cancel);
        const std::size_t idx = work.front();
        work.pop_front();
        if (!alive[idx]) {
            continue;
        }
        const Marking current = basis[idx];
        for (const TpnTransition& t : net.transitions) {
            for (Marking& c : min_pre_basis(net, t, current)) {
                if (use_groups && !within_groups(c)) {
                    continue;
                }
                bool covered = false;
                for (std::size_t i = 0; i < basis.size() && !covered; ++i) {
                    covered = alive[i] && leq(basis[i], c);
                }
                if (covered) {
                    continue;
                }
                if (leq(c, net.initial)) {
                    return true;
                }
                for (std::size_t i = 0; i < basis.size(); ++i) {
                    if (alive[i] && leq(c, basis[i])) {
                        alive[i] = false;
                        --live;
                    }
                }
                basis.push_back(std::move(c));
                alive.push_back(true);
                work.push_back(basis.size() - 1);
                if (++live > opts.max_basis) {
                    throw ResourceError("coverability basis exceeded " + std::to_string(opts.max_basis) +
                                        " elements");
                }
            }
        }
    }
    return false;
}

std::optional<std::vector<std::size_t>> forward_cover_search(const Tpn& net, const Marking& target,
                                                             std::size_t max_depth, Count token_cap,
                                                             const CancelToken* cancel) {
    for (Count c : target) {
        token_cap = std::max(token_cap, c);
    }
    auto clamp = [&](Marking m) {
        for (Count& c : m) {
            c = std::min(c, token_cap);
        }
        return m;
    };
    struct Node {
        Marking marking;
        std::size_t parent;
        std::size_t via;
        std::size_t depth;
    };
    std::vector<Node> nodes{{clamp(net.initial), 0, 0, 0}};
    std::set<Marking> seen{nodes[0].marking};
    auto path_to = [&](std::size_t i) {
        std::vector<std::size_t> path;
        while (i != 0) {
            path.push_back(nodes[i].via);
            i = nodes[i].parent;
        }
        std::reverse(path.begin(), path.end());
        return path;
    };
    if (leq(target, nodes[0].marking)) {
        return std::vector<std::size_t>{};
    }
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        poll(cancel);
        if (nodes[i].depth >= max_depth) {
            continue;
        }
        for (std::size_t k = 0; k < net.transitions.size(); ++k) {
            auto next = fire(net, nodes[i].marking, net.transitions[k]);
            if (!next) {
                continue;
            }
            Marking m = clamp(std::move(*next));
            if (!seen.insert(m).second) {
                continue;
            }
            nodes.push_back({std::move(m), i, k, nodes[i].depth + 1});
            if (leq(target, nodes.back().marking)) {
                return path_to(nodes.size() - 1);
            }
        }
    }
    return std::nullopt;
}

std::string to_string(const Tpn& net, const Marking& m) {
    std::string out = "{";
    bool first = true;
    for (std::size_t p = 0; p < m.size(); ++p) {
        if (m[p] == 0) {
            continue;
        }
        out += (first ? "" : ", ") + net.places[p] + ":" + std::to_string(m[p]);
        first = false;
    }
    return out + "}";
}

}  // namespace rsakit
