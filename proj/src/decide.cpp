// decide.cpp -- emptiness via the region net, and inclusion in Boolean
// combinations of one-register equality automata
#include "rsakit/decide.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

#include "rsakit/algebra.hpp"
#include "rsakit/reduction.hpp"
#include "rsakit/tpn.hpp"

namespace rsakit {

namespace {

Datum smallest_in_region(const RsaConfig& cfg, Region rho) {
    std::map<Datum, Region> where;
    for (std::size_t r = 0; r < cfg.regs.size(); ++r) {
        for (Datum d : cfg.regs[r]) {
            where[d] |= reg_bit(static_cast<RegId>(r));
        }
    }
    for (const auto& [d, region] : where) {
        if (region == rho) {
            return d;
        }
    }
    throw std::logic_error("witness replay: region has no datum");
}

/// Turns a firing sequence of the region net into a data word.
DataWord replay(const Rsa& a, const RsaTpn& red, const std::vector<std::size_t>& path) {
    DataWord w;
    RsaConfig cfg;
    std::set<Datum> used;
    for (std::size_t k : path) {
        const TpnStep& step = red.map.transition_of[k];
        switch (step.kind) {
        case TpnStep::Kind::start:
            cfg = RsaConfig{step.state, std::vector<std::vector<Datum>>(a.num_registers())};
            break;
        case TpnStep::Kind::accept:
            break;
        case TpnStep::Kind::step: {
            const RsaTransition& t = a.delta[step.rsa_transition];
            Datum d = 1;
            if (step.fresh) {
                while (used.count(d) != 0) {
                    ++d;
                }
            } else {
                d = smallest_in_region(cfg, step.region);
            }
            auto next = rsa_step(cfg, t, Symbol{t.letter, d});
            if (!next) {
                throw std::logic_error("witness replay: transition not enabled");
            }
            cfg = std::move(*next);
            w.push_back(Symbol{t.letter, d});
            used.insert(d);
            break;
        }
        }
    }
    return w;
}

std::optional<DataWord> find_witness(const Rsa& a, const RsaTpn& red, const DecideOptions& opts) {
    for (Count cap = 1; cap <= 8; cap *= 2) {
        auto path = forward_cover_search(red.net, red.target, opts.forward_depth, cap, opts.cancel);
        if (path) {
            DataWord w = replay(a, red, *path);
            if (!rsa_membership(a, w)) {
                throw std::logic_error("witness does not replay");
            }
            return w;
        }
    }
    return std::nullopt;
}

}  // namespace

Verdict is_empty(const Rsa& a, const DecideOptions& opts) {
    if (!a.is_canonical()) {
        throw InputError("emptiness needs an automaton without epsilon edges");
    }
    ReductionOptions ropts;
    ropts.prune_regions = true;
    RsaTpn red = rsa_to_tpn(a, ropts);
    CoverOptions copts;
    copts.max_basis = opts.max_basis;
    copts.cancel = opts.cancel;
    Verdict v;
    v.answer = !is_coverable(red.net, red.target, copts);
    if (!v.answer && opts.want_witness) {
        v.witness = find_witness(a, red, opts);
    }
    return v;
}

// ---------------------------------------------------------------------------
// Expressions

std::shared_ptr<const IncExpr> IncExpr::make_leaf(Nra a) {
    auto e = std::make_shared<IncExpr>();
    e->kind = Kind::leaf;
    e->leaf = std::make_shared<const Nra>(std::move(a));
    return e;
}

std::shared_ptr<const IncExpr> IncExpr::make_union(std::shared_ptr<const IncExpr> a,
                                                   std::shared_ptr<const IncExpr> b) {
    auto e = std::make_shared<IncExpr>();
    e->kind = Kind::union_of;
    e->args = {std::move(a), std::move(b)};
    return e;
}

std::shared_ptr<const IncExpr> IncExpr::make_intersection(std::shared_ptr<const IncExpr> a,
                                                          std::shared_ptr<const IncExpr> b) {
    auto e = std::make_shared<IncExpr>();
    e->kind = Kind::intersection;
    e->args = {std::move(a), std::move(b)};
    return e;
}

std::shared_ptr<const IncExpr> IncExpr::make_complement(std::shared_ptr<const IncExpr> a) {
    auto e = std::make_shared<IncExpr>();
    e->kind = Kind::complement;
    e->args = {std::move(a)};
    return e;
}

std::vector<std::string> fragment_violations(const Nra& a) {
    std::vector<std::string> out = validate(a);
    if (a.num_registers() > 1) {
        out.push_back("automaton '" + a.name + "' has more than one register");
    }
    for (const NraTransition& t : a.delta) {
        if (t.neq != 0) {
            out.push_back("automaton '" + a.name + "' uses a disequality guard: " + describe(a, t));
            break;
        }
    }
    return out;
}

namespace {

void collect_letters(const IncExpr& e, std::vector<std::string>& out) {
    if (e.kind == IncExpr::Kind::leaf) {
        for (const std::string& l : e.leaf->letters) {
            if (std::find(out.begin(), out.end(), l) == out.end()) {
                out.push_back(l);
            }
        }
        return;
    }
    for (const auto& arg : e.args) {
        collect_letters(*arg, out);
    }
}

}  // namespace

std::vector<std::string> expr_letters(const IncExpr& e) {
    std::vector<std::string> out;
    collect_letters(e, out);
    return out;
}

bool expr_membership(const IncExpr& e, const DataWord& w, const std::vector<std::string>& word_letters) {
    switch (e.kind) {
    case IncExpr::Kind::leaf: {
        DataWord local;
        for (const Symbol& s : w) {
            auto it = std::find(e.leaf->letters.begin(), e.leaf->letters.end(), word_letters.at(s.letter));
            if (it == e.leaf->letters.end()) {
                return false;
            }
            local.push_back(Symbol{static_cast<LetterId>(it - e.leaf->letters.begin()), s.datum});
        }
        return nra_membership(*e.leaf, local);
    }
    case IncExpr::Kind::union_of:
        return expr_membership(*e.args[0], w, word_letters) || expr_membership(*e.args[1], w, word_letters);
    case IncExpr::Kind::intersection:
        return expr_membership(*e.args[0], w, word_letters) && expr_membership(*e.args[1], w, word_letters);
    case IncExpr::Kind::complement:
        return !expr_membership(*e.args[0], w, word_letters);
    }
    return false;
}

namespace {

Rsa compile_rec(const IncExpr& e, const std::vector<std::string>& letters, const DecideOptions& opts) {
    switch (e.kind) {
    case IncExpr::Kind::leaf: {
        auto issues = fragment_violations(*e.leaf);
        if (!issues.empty()) {
            throw InputError(issues.front());
        }
        DeterminiseOptions dopts;
        dopts.max_macrostates = opts.max_macrostates;
        dopts.cancel = opts.cancel;
        DeterminisationOutcome out = determinise_pipeline(*e.leaf, dopts);
        if (!out.ok()) {
            throw InputError("automaton '" + e.leaf->name + "' could not be determinised (" +
                             std::string(to_string(out.bot->reason)) + ")");
        }
        return with_alphabet(*out.automaton, letters);
    }
    case IncExpr::Kind::complement:
        return complement_drsa(compile_rec(*e.args[0], letters, opts));
    case IncExpr::Kind::intersection:
        return intersect_rsa(compile_rec(*e.args[0], letters, opts), compile_rec(*e.args[1], letters, opts));
    case IncExpr::Kind::union_of:
        return union_drsa(compile_rec(*e.args[0], letters, opts), compile_rec(*e.args[1], letters, opts));
    }
    throw std::logic_error("unknown expression kind");
}

}  // namespace

Rsa compile_expr(const IncExpr& e, const std::vector<std::string>& letters, const DecideOptions& opts) {
    std::vector<std::string> all = letters;
    for (const std::string& l : expr_letters(e)) {
        if (std::find(all.begin(), all.end(), l) == all.end()) {
            all.push_back(l);
        }
    }
    return compile_rec(e, all, opts);
}

Verdict check_inclusion(const Rsa& a, const IncExpr& e, const DecideOptions& opts) {
    Rsa rhs = compile_expr(e, a.letters, opts);
    Rsa bad = intersect_rsa(a, complement_drsa(rhs));
    Verdict v = is_empty(bad, opts);
    if (v.witness) {
        // The product lists the letters of `a` first, so ids carry over.
        for (const Symbol& s : *v.witness) {
            if (s.letter >= a.letters.size() || bad.letters[s.letter] != a.letters[s.letter]) {
                throw std::logic_error("inclusion witness uses a foreign letter");
            }
        }
    }
    return v;
}

}  // namespace rsakit
