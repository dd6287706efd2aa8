#include "modrad/moebius.hpp"

#include <algorithm>
#include <cmath>

namespace modrad {

namespace {

// Sphere-or-plane in quadric form A|x|^2 + <B,x> + C = 0.
// Plane: A = 0, <B,x> = -C.  Sphere: A != 0, center -B/2A, radius^2 = |B|^2/4A^2 - C/A.
struct Quadric {
    double A;
    Point B;
    double C;
};

Quadric to_quadric(const SphereOrPlane& sp) {
    if (std::holds_alternative<Sphere>(sp)) {
        const Sphere& s = std::get<Sphere>(sp);
        return {1.0, scale(s.center, -2.0), dot(s.center, s.center) - s.radius * s.radius};
    }
    const Hyperplane& h = std::get<Hyperplane>(sp);
    return {0.0, h.normal, -h.offset};
}

SphereOrPlane from_quadric(const Quadric& q) {
    const double bn = norm(q.B);
    if (std::abs(q.A) < 1e-13 * std::max(1.0, bn)) {
        if (bn == 0.0) throw std::runtime_error("degenerate quadric: no sphere or plane");
        return Hyperplane(q.B, -q.C);
    }
    Point center = scale(q.B, -0.5 / q.A);
    const double r2 = dot(center, center) - q.C / q.A;
    if (!(r2 > 0.0)) throw std::runtime_error("degenerate quadric: nonpositive radius");
    return Sphere(center, std::sqrt(r2));
}

// Quadric for the set { x : F(s(x)) = 0 }, i.e. the preimage of F's zero set
// under the stage s.
Quadric quadric_preimage(const Quadric& q, const Stage& st) {
    if (std::holds_alternative<Inversion>(st)) {
        const Inversion& inv = std::get<Inversion>(st);
        const Point& a = inv.center;
        const double r2 = inv.r2;
        // Recenter at a: F(a + w) = A|w|^2 + <B',w> + C' with
        // B' = 2A a + B,  C' = A|a|^2 + <B,a> + C.
        Point Bp = add(scale(a, 2.0 * q.A), q.B);
        double Cp = q.A * dot(a, a) + dot(q.B, a) + q.C;
        // Substitute w = r2 z / |z|^2 and clear |z|^2:
        // (A', B', C') -> (C', r2 B', A' r2^2), then shift z = x - a back.
        double A2 = Cp;
        Point B2 = scale(Bp, r2);
        double C2 = q.A * r2 * r2;
        Point Bx = add(scale(a, -2.0 * A2), B2);
        double Cx = A2 * dot(a, a) - dot(B2, a) + C2;
        return {A2, Bx, Cx};
    }
    // Affine stages s(x) = Qx + b: F(s(x)) has
    // A' = A s_scale^2 handled per case below.
    if (std::holds_alternative<ScalingStage>(st)) {
        const double lam = std::get<ScalingStage>(st).factor;
        return {q.A * lam * lam, scale(q.B, lam), q.C};
    }
    // Isometries: A unchanged; B -> Q^T (2A b + B); C -> A|b|^2 + <B,b> + C.
    // Rotation has b = 0; translation has Q = I; reflection we expand directly.
    if (std::holds_alternative<TranslationStage>(st)) {
        const Point& b = std::get<TranslationStage>(st).shift;
        return {q.A, add(scale(b, 2.0 * q.A), q.B), q.A * dot(b, b) + dot(q.B, b) + q.C};
    }
    if (std::holds_alternative<RotationStage>(st)) {
        const double beta = std::get<RotationStage>(st).beta;
        return {q.A, rotate(q.B, -beta), q.C};
    }
    const Hyperplane& pl = std::get<ReflectionStage>(st).plane;
    // s(x) = x - t(x) a with Q symmetric involution, b = 2 tau a/|a|^2.
    const double n2 = dot(pl.normal, pl.normal);
    Point b = scale(pl.normal, 2.0 * pl.offset / n2);
    // Q^T v = Q v = reflect(v, {a, 0}).
    Hyperplane through_origin(pl.normal, 0.0);
    Point Bv = add(scale(b, 2.0 * q.A), q.B);
    return {q.A, reflect(Bv, through_origin), q.A * dot(b, b) + dot(q.B, b) + q.C};
}

}  // namespace

Point stage_apply(const Stage& s, const Point& x) {
    if (std::holds_alternative<Inversion>(s)) {
        const Inversion& inv = std::get<Inversion>(s);
        Point d = sub(x, inv.center);
        const double d2 = dot(d, d);
        if (d2 < kPoleTol * kPoleTol)
            throw std::domain_error("MoebiusMap: evaluation at an inversion pole");
        return add(inv.center, scale(d, inv.r2 / d2));
    }
    if (std::holds_alternative<ReflectionStage>(s))
        return reflect(x, std::get<ReflectionStage>(s).plane);
    if (std::holds_alternative<RotationStage>(s))
        return rotate(x, std::get<RotationStage>(s).beta);
    if (std::holds_alternative<TranslationStage>(s))
        return add(x, std::get<TranslationStage>(s).shift);
    return scale(x, std::get<ScalingStage>(s).factor);
}

Stage stage_inverse(const Stage& s) {
    if (std::holds_alternative<RotationStage>(s))
        return RotationStage{-std::get<RotationStage>(s).beta};
    if (std::holds_alternative<TranslationStage>(s))
        return TranslationStage{scale(std::get<TranslationStage>(s).shift, -1.0)};
    if (std::holds_alternative<ScalingStage>(s))
        return ScalingStage{1.0 / std::get<ScalingStage>(s).factor};
    return s;  // inversions and reflections are involutions
}

double stage_conformal_factor(const Stage& s, const Point& x) {
    if (std::holds_alternative<Inversion>(s)) {
        const Inversion& inv = std::get<Inversion>(s);
        const double d2 = dot(sub(x, inv.center), sub(x, inv.center));
        if (d2 < kPoleTol * kPoleTol)
            throw std::domain_error("conformal_factor: evaluation at an inversion pole");
        return std::abs(inv.r2) / d2;
    }
    if (std::holds_alternative<ScalingStage>(s))
        return std::abs(std::get<ScalingStage>(s).factor);
    return 1.0;
}

Point MoebiusMap::apply(const Point& x) const {
    Point y = x;
    for (const Stage& s : stages_) y = stage_apply(s, y);
    return y;
}

double MoebiusMap::conformal_factor(const Point& x) const {
    double f = 1.0;
    Point y = x;
    for (const Stage& s : stages_) {
        f *= stage_conformal_factor(s, y);
        y = stage_apply(s, y);
    }
    return f;
}

MoebiusMap MoebiusMap::inverse() const {
    std::vector<Stage> rev;
    rev.reserve(stages_.size());
    for (auto it = stages_.rbegin(); it != stages_.rend(); ++it)
        rev.push_back(stage_inverse(*it));
    return MoebiusMap(std::move(rev));
}

std::vector<Point> MoebiusMap::poles() const {
    std::vector<Point> ps;
    // A pole of stage k is the preimage of its center under stages 1..k-1.
    for (size_t k = 0; k < stages_.size(); ++k) {
        if (!std::holds_alternative<Inversion>(stages_[k])) continue;
        Point c = std::get<Inversion>(stages_[k]).center;
        bool reachable = true;
        for (size_t j = k; j-- > 0;) {
            try {
                c = stage_apply(stage_inverse(stages_[j]), c);
            } catch (const std::domain_error&) {
                reachable = false;  // the center itself is a pole upstream
                break;
            }
        }
        if (reachable) ps.push_back(c);
    }
    return ps;
}

SphereOrPlane MoebiusMap::preimage(const SphereOrPlane& sp) const {
    Quadric q = to_quadric(sp);
    for (auto it = stages_.rbegin(); it != stages_.rend(); ++it) q = quadric_preimage(q, *it);
    return from_quadric(q);
}

MoebiusMap halfspace_map(const Point& a) {
    const double an = norm(a);
    if (an == 0.0) throw std::invalid_argument("halfspace_map: a must be nonzero");
    std::vector<Stage> st;
    st.push_back(TranslationStage{a});
    st.push_back(Inversion(Point::zero(a.dim()), 2.0 * an));
    st.push_back(TranslationStage{scale(a, -1.0 / an)});
    return MoebiusMap(std::move(st));
}

PsiMap build_psi(const Point& a1, const Point& a2) {
    check_same_dim(a1, a2, "build_psi");
    if (!(norm(a1) < 1.0) || !(norm(a2) < 1.0))
        throw std::invalid_argument("build_psi: points must lie in the open unit ball");
    if (dist(a1, a2) < kPoleTol)
        throw std::invalid_argument("build_psi: a1 and a2 must be distinct");

    PsiMap out;
    MoebiusMap f1;
    if (norm(a1) > 0.0) {
        const Point a = scale(a1, 1.0 / dot(a1, a1));
        f1.push_back(Inversion(a, dot(a, a) - 1.0));
    }
    const Point y2 = f1.empty() ? a2 : f1.apply(a2);
    const double y2n = norm(y2);

    out.map = f1;
    if (y2n < 1e-12) {
        out.f2_degenerate = true;  // f1 already centered the pair; f2 := id
    } else {
        const Point b = scale(y2, (1.0 + std::sqrt(1.0 - y2n * y2n)) / (y2n * y2n));
        const double rho2 = dot(b, b) - 1.0;
        out.map.push_back(Inversion(b, rho2));
    }
    out.c = out.map.empty() ? a1 : out.map.apply(a1);
    return out;
}

SphereOrPlane separating_hypersphere(const Point& a1, const Point& a2) {
    PsiMap psi = build_psi(a1, a2);
    if (norm(psi.c) < 1e-14)
        throw std::invalid_argument("separating_hypersphere: psi(a1) = 0, no separating plane");
    if (psi.map.empty()) return Hyperplane(psi.c, 0.0);
    return psi.map.preimage(Hyperplane(psi.c, 0.0));
}

}  // namespace modrad
