#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "modrad/geometry.hpp"

namespace modrad {

// Distance under which an evaluation point is considered to sit on a pole.
inline constexpr double kPoleTol = 1e-12;

// Inversion x -> a + r2 (x - a) / |x - a|^2.  r2 is a *signed* square radius;
// the map is an involution away from its pole at x = a.
struct Inversion {
    Point center;
    double r2 = 1.0;

    Inversion(Point a, double r2_) : center(std::move(a)), r2(r2_) {
        if (r2 == 0.0) throw std::invalid_argument("Inversion: r2 must be nonzero");
    }
};

struct ReflectionStage {
    Hyperplane plane;
};

// Rotation in the (x1,x2) plane by beta (the paper's angular rotation).
struct RotationStage {
    double beta = 0.0;
};

struct TranslationStage {
    Point shift;
};

struct ScalingStage {
    double factor = 1.0;
};

using Stage = std::variant<Inversion, ReflectionStage, RotationStage, TranslationStage, ScalingStage>;

Point stage_apply(const Stage& s, const Point& x);
Stage stage_inverse(const Stage& s);
// |det D s(x)|^{1/n}; throws on poles.
double stage_conformal_factor(const Stage& s, const Point& x);

// Either a genuine hypersphere or a hyperplane (the paper's "hypersphere").
using SphereOrPlane = std::variant<Sphere, Hyperplane>;

// Composition of primitive Moebius stages, evaluated stage by stage.
class MoebiusMap {
  public:
    MoebiusMap() = default;
    explicit MoebiusMap(std::vector<Stage> stages) : stages_(std::move(stages)) {}

    const std::vector<Stage>& stages() const { return stages_; }
    bool empty() const { return stages_.empty(); }

    Point apply(const Point& x) const;
    double conformal_factor(const Point& x) const;

    // Stage list reversed, each stage replaced by its own inverse.
    MoebiusMap inverse() const;

    // Inversion centers as seen in the original coordinates (points that some
    // stage maps to infinity).
    std::vector<Point> poles() const;

    // Preimage of a sphere or plane under this map (spheres/planes are
    // preserved by every stage).
    SphereOrPlane preimage(const SphereOrPlane& sp) const;

    void push_back(Stage s) { stages_.push_back(std::move(s)); }

  private:
    std::vector<Stage> stages_;
};

// The map f(x) = -a/|a| + 2|a|(x+a)/|x+a|^2 sending a to the origin and
// L(a,0) onto S(0,1); pole at x = -a.
MoebiusMap halfspace_map(const Point& a);

struct PsiMap {
    MoebiusMap map;
    // psi(a1) = c, psi(a2) = -c.
    Point c;
    // Set when f1(a2) fell within kPoleTol of the origin and the second
    // inversion was replaced by the identity (convention; the source formula
    // for b degenerates there).
    bool f2_degenerate = false;
};

// psi_{a1,a2} = f2 . f1 with both inversions taken verbatim; preserves B(0,1)
// and sends a1, a2 to a symmetric pair c, -c.
PsiMap build_psi(const Point& a1, const Point& a2);

// C(a1,a2): preimage of the hyperplane <c,x> = 0 under psi; orthogonal to
// S(0,1) and separating a1 from a2.
SphereOrPlane separating_hypersphere(const Point& a1, const Point& a2);

}  // namespace modrad
