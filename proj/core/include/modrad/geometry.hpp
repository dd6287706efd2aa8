#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace modrad {

inline constexpr double kPi = 3.14159265358979323846;

// Euclidean point in R^n, n >= 2.  Dimension is a runtime property and is
// checked on every binary operation.
struct Point {
    std::vector<double> c;

    Point() = default;
    explicit Point(std::vector<double> coords) : c(std::move(coords)) {
        if (c.size() < 2) throw std::invalid_argument("Point: dimension must be >= 2");
        for (double v : c)
            if (!std::isfinite(v)) throw std::invalid_argument("Point: non-finite coordinate");
    }
    Point(std::initializer_list<double> coords) : Point(std::vector<double>(coords)) {}

    int dim() const { return static_cast<int>(c.size()); }
    double operator[](int i) const { return c[static_cast<size_t>(i)]; }
    double& operator[](int i) { return c[static_cast<size_t>(i)]; }

    static Point zero(int n) { return Point(std::vector<double>(static_cast<size_t>(n), 0.0)); }
};

inline void check_same_dim(const Point& a, const Point& b, const char* what) {
    if (a.dim() != b.dim())
        throw std::invalid_argument(std::string(what) + ": dimension mismatch");
}

inline double dot(const Point& a, const Point& b) {
    check_same_dim(a, b, "dot");
    double s = 0.0;
    for (int i = 0; i < a.dim(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm(const Point& a) { return std::sqrt(dot(a, a)); }

inline Point add(const Point& a, const Point& b) {
    check_same_dim(a, b, "add");
    Point r = a;
    for (int i = 0; i < a.dim(); ++i) r[i] += b[i];
    return r;
}

inline Point sub(const Point& a, const Point& b) {
    check_same_dim(a, b, "sub");
    Point r = a;
    for (int i = 0; i < a.dim(); ++i) r[i] -= b[i];
    return r;
}

inline Point scale(const Point& a, double s) {
    Point r = a;
    for (int i = 0; i < a.dim(); ++i) r[i] *= s;
    return r;
}

inline double dist(const Point& a, const Point& b) { return norm(sub(a, b)); }

// Cylindrical coordinates [rho, theta, x'] with x1 = rho cos(theta),
// x2 = rho sin(theta), x' = (x3,...,xn).  theta is canonicalized to [0, 2pi)
// and set to 0 on the axis rho = 0.
struct CylCoords {
    double rho = 0.0;
    double theta = 0.0;
    std::vector<double> xprime;
};

inline double wrap_angle(double t) {
    double w = std::fmod(t, 2.0 * kPi);
    if (w < 0.0) w += 2.0 * kPi;
    // fmod can land exactly on 2pi after the correction
    if (w >= 2.0 * kPi) w -= 2.0 * kPi;
    return w;
}

inline CylCoords to_cylindrical(const Point& x) {
    CylCoords cc;
    cc.rho = std::hypot(x[0], x[1]);
    cc.theta = (cc.rho == 0.0) ? 0.0 : wrap_angle(std::atan2(x[1], x[0]));
    cc.xprime.assign(x.c.begin() + 2, x.c.end());
    return cc;
}

inline Point from_cylindrical(const CylCoords& cc) {
    std::vector<double> v;
    v.reserve(cc.xprime.size() + 2);
    v.push_back(cc.rho * std::cos(cc.theta));
    v.push_back(cc.rho * std::sin(cc.theta));
    v.insert(v.end(), cc.xprime.begin(), cc.xprime.end());
    return Point(std::move(v));
}

// Rotation by beta acts on the angular coordinate only:
// [rho, theta, x'] -> [rho, theta + beta, x'].
inline Point rotate(const Point& x, double beta) {
    const double cb = std::cos(beta), sb = std::sin(beta);
    Point r = x;
    r[0] = cb * x[0] - sb * x[1];
    r[1] = sb * x[0] + cb * x[1];
    return r;
}

// Hyperplane L(a, tau) = { x : <x,a> = tau }, a != 0.
struct Hyperplane {
    Point normal;
    double offset = 0.0;

    Hyperplane(Point a, double tau) : normal(std::move(a)), offset(tau) {
        if (norm(normal) == 0.0) throw std::invalid_argument("Hyperplane: zero normal");
    }
};

inline double signed_distance(const Point& x, const Hyperplane& L) {
    return (dot(x, L.normal) - L.offset) / norm(L.normal);
}

// Reflection in L: x - 2(<x,a> - tau) a / |a|^2.  Involution fixing exactly L.
inline Point reflect(const Point& x, const Hyperplane& L) {
    check_same_dim(x, L.normal, "reflect");
    const double n2 = dot(L.normal, L.normal);
    const double t = 2.0 * (dot(x, L.normal) - L.offset) / n2;
    return sub(x, scale(L.normal, t));
}

struct Sphere {
    Point center;
    double radius = 0.0;

    Sphere(Point a, double r) : center(std::move(a)), radius(r) {
        if (!(r > 0.0)) throw std::invalid_argument("Sphere: radius must be > 0");
    }
};

struct Ball {
    Point center;
    double radius = 0.0;

    Ball(Point a, double r) : center(std::move(a)), radius(r) {
        if (!(r > 0.0)) throw std::invalid_argument("Ball: radius must be > 0");
    }
    bool contains(const Point& x) const { return dist(x, center) < radius; }
};

}  // namespace modrad
