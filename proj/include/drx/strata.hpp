#pragma once

#include "drx/canonical.hpp"
#include "drx/decor.hpp"
#include "drx/graph.hpp"
#include "drx/rational.hpp"
#include "drx/target.hpp"

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace drx {

enum class GraphKind { XValued, PrestableZ };

// Ambient data a tautological class lives over. X-valued classes know the
// total curve class and target; prestable-Z classes track only (g, n).
struct Ambient {
    int g = 0, n = 0;
    CurveClass beta;
    TargetModel target = TargetModel::point();
    GraphKind kind = GraphKind::XValued;

    bool operator==(const Ambient& o) const {
        return g == o.g && n == o.n && beta == o.beta && target == o.target && kind == o.kind;
    }
};

struct Term {
    StableGraph graph;
    Decoration decor;
    Rational coeff;
};

// Exact linear combination of canonically ordered decorated graphs. Keys
// are canonical decorated certificates; zero coefficients are never stored.
class TautClass {
  public:
    TautClass() = default;
    explicit TautClass(Ambient a) : ambient_(std::move(a)) {}

    static TautClass fundamental(const Ambient& a) {
        TautClass out(a);
        StableGraph g;
        g.vertices.push_back({a.g, a.kind == GraphKind::XValued ? a.beta : CurveClass{0}});
        for (int i = 1; i <= a.n; ++i) g.legs.push_back({i, 0});
        out.add_term(g, Decoration::empty_for(g), 1);
        return out;
    }

    const Ambient& ambient() const { return ambient_; }
    const std::map<std::string, Term>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    size_t size() const { return terms_.size(); }

    // Canonicalize and merge one raw term. Decorations that vanish for the
    // ambient data are dropped here: over a point target X there is no
    // line bundle content, so positive xi powers and eta_{a,b} factors
    // with b > 0 are zero.
    void add_term(const StableGraph& graph, const Decoration& decor, const Rational& coeff) {
        if (coeff == 0) return;
        if (drops_for_point_target(decor)) return;
        Decoration d = decor;
        d.sort_eta();
        prune_eta(d);
        auto [cg, cd] = canonicalize_decorated(graph, d);
        std::string key = decorated_key(cg, cd);
        auto it = terms_.find(key);
        if (it == terms_.end()) {
            terms_.emplace(std::move(key), Term{std::move(cg), std::move(cd), coeff});
        } else {
            it->second.coeff += coeff;
            if (it->second.coeff == 0) terms_.erase(it);
        }
    }

    TautClass& accumulate(const TautClass& o) {
        check_ambient(o);
        for (const auto& [k, t] : o.terms_) add_term(t.graph, t.decor, t.coeff);
        return *this;
    }

    TautClass& scale_by(const Rational& c) {
        if (c == 0) {
            terms_.clear();
            return *this;
        }
        for (auto& [k, t] : terms_) t.coeff *= c;
        return *this;
    }

    TautClass degree_component(int d) const {
        TautClass out(ambient_);
        for (const auto& [k, t] : terms_)
            if (term_codim(t.graph, t.decor) == d) out.terms_.emplace(k, t);
        return out;
    }

    bool operator==(const TautClass& o) const {
        if (!(ambient_ == o.ambient_) || terms_.size() != o.terms_.size()) return false;
        auto it = terms_.begin();
        auto jt = o.terms_.begin();
        for (; it != terms_.end(); ++it, ++jt)
            if (it->first != jt->first || it->second.coeff != jt->second.coeff) return false;
        return true;
    }

    void check_ambient(const TautClass& o) const {
        if (!(ambient_ == o.ambient_)) throw std::invalid_argument("ambient mismatch");
    }

  private:
    bool drops_for_point_target(const Decoration& d) const {
        if (ambient_.kind != GraphKind::XValued ||
            ambient_.target.kind() != TargetKind::Point)
            return false;
        for (const auto& l : d.legs)
            if (l.xi > 0) return true;
        for (int x : d.exi)
            if (x > 0) return true;
        for (const auto& v : d.eta)
            for (const auto& f : v)
                if (f.b > 0 && f.exp > 0) return true;
        return false;
    }

    static void prune_eta(Decoration& d) {
        for (auto& v : d.eta)
            std::erase_if(v, [](const EtaFactor& f) { return f.exp == 0; });
    }

    static std::string decorated_key(const StableGraph& g, const Decoration& d) {
        return detail::build_cert(g, &d, identity_ordering(g));
    }

    static std::vector<int> identity_ordering(const StableGraph& g) {
        std::vector<int> ord(g.num_vertices());
        for (int i = 0; i < g.num_vertices(); ++i) ord[i] = i;
        return ord;
    }

    Ambient ambient_;
    std::map<std::string, Term> terms_;
};

inline TautClass normalize(const Ambient& a, const std::vector<Term>& raw) {
    TautClass out(a);
    for (const auto& t : raw) out.add_term(t.graph, t.decor, t.coeff);
    return out;
}

inline TautClass add(const TautClass& a, const TautClass& b) {
    a.check_ambient(b);
    TautClass out = a;
    out.accumulate(b);
    return out;
}

inline TautClass scale(const TautClass& a, const Rational& c) {
    TautClass out = a;
    out.scale_by(c);
    return out;
}

inline TautClass degree_component(const TautClass& a, int d) { return a.degree_component(d); }

}  // namespace drx
