#include "modrad/modulus.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <nlohmann/json.hpp>
#include <queue>
#include <set>
#include <stdexcept>

namespace modrad {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Row {
    std::vector<int> idx;
    std::vector<double> coeff;  // weight * edge length
    double lambda = 0.0;
    Curve origin;
};

class DualAscent {
  public:
    DualAscent(const GridGraph& g, double p) : g_(g), p_(p), q_(1.0 / (p - 1.0)) {
        if (!(p > 1.0)) throw std::invalid_argument("p-modulus solver needs p > 1");
        const size_t m = g.edges.size();
        w_.assign(m, 0.0);
        rho_.assign(m, 0.0);
        inv_psigma_.resize(m);
        for (size_t e = 0; e < m; ++e) inv_psigma_[e] = 1.0 / (p * g.edges[e].sigma);
        touched_.assign(m, 0);
    }

    void add_row(Row row) {
        if (row.idx.empty()) throw std::invalid_argument("curve with empty edge set");
        for (int e : row.idx)
            if (!touched_[static_cast<size_t>(e)]) {
                touched_[static_cast<size_t>(e)] = 1;
                touched_list_.push_back(e);
            }
        rows_.push_back(std::move(row));
    }

    // Returns the number of sweeps used.
    int solve(double inner_tol, int max_sweeps) {
        int sweeps = 0;
        while (sweeps < max_sweeps) {
            ++sweeps;
            for (Row& r : rows_) step(r);
            double lmin = kInf, lsum = 0.0;
            for (const Row& r : rows_) {
                double L = 0.0;
                for (size_t i = 0; i < r.idx.size(); ++i)
                    L += r.coeff[i] * rho_[static_cast<size_t>(r.idx[i])];
                lmin = std::min(lmin, L);
                lsum += r.lambda;
            }
            const double E = energy();
            const double dual = lsum - (p_ - 1.0) * E;
            if (lmin > 0.0) {
                const double primal = E / std::pow(lmin, p_);
                if (primal - dual <= inner_tol * std::max(primal, 1e-300)) break;
            }
        }
        return sweeps;
    }

    double energy() const {
        double E = 0.0;
        for (int e : touched_list_)
            E += g_.edges[static_cast<size_t>(e)].sigma *
                 std::pow(rho_[static_cast<size_t>(e)], p_);
        return E;
    }

    double dual_value() const {
        double lsum = 0.0;
        for (const Row& r : rows_) lsum += r.lambda;
        return lsum - (p_ - 1.0) * energy();
    }

    double min_row_length() const {
        double lmin = kInf;
        for (const Row& r : rows_) {
            double L = 0.0;
            for (size_t i = 0; i < r.idx.size(); ++i)
                L += r.coeff[i] * rho_[static_cast<size_t>(r.idx[i])];
            lmin = std::min(lmin, L);
        }
        return lmin;
    }

    const std::vector<double>& rho() const { return rho_; }
    const std::vector<Row>& rows() const { return rows_; }

  private:
    void step(Row& r) {
        const size_t k = r.idx.size();
        wot_.resize(k);
        for (size_t i = 0; i < k; ++i)
            wot_[i] = std::max(0.0, w_[static_cast<size_t>(r.idx[i])] - r.lambda * r.coeff[i]);
        auto length_at = [&](double lam) {
            double L = 0.0;
            for (size_t i = 0; i < k; ++i) {
                double x = (wot_[i] + lam * r.coeff[i]) * inv_psigma_[static_cast<size_t>(r.idx[i])];
                L += r.coeff[i] * std::pow(x, q_);
            }
            return L;
        };
        double lam;
        if (length_at(0.0) >= 1.0) {
            lam = 0.0;
        } else {
            double lo = 0.0, hi = std::max(r.lambda, 1e-12);
            int guard = 0;
            while (length_at(hi) < 1.0) {
                lo = hi;
                hi *= 2.0;
                if (++guard > 2000) throw std::runtime_error("modulus subproblem diverged");
            }
            lam = 0.5 * (lo + hi);
            for (int it = 0; it < 60 && hi - lo > 1e-14 * (1.0 + hi); ++it) {
                double f = length_at(lam) - 1.0;
                if (f >= 0.0) hi = lam; else lo = lam;
                double df = 0.0;
                for (size_t i = 0; i < k; ++i) {
                    double ips = inv_psigma_[static_cast<size_t>(r.idx[i])];
                    double x = (wot_[i] + lam * r.coeff[i]) * ips;
                    if (x > 0.0)
                        df += r.coeff[i] * r.coeff[i] * q_ * std::pow(x, q_ - 1.0) * ips;
                }
                double next = (df > 0.0 && std::isfinite(df)) ? lam - f / df : 0.5 * (lo + hi);
                if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
                lam = next;
            }
        }
        const double dl = lam - r.lambda;
        if (dl != 0.0) {
            r.lambda = lam;
            for (size_t i = 0; i < k; ++i) {
                size_t e = static_cast<size_t>(r.idx[i]);
                w_[e] = std::max(0.0, w_[e] + dl * r.coeff[i]);
                rho_[e] = std::pow(w_[e] * inv_psigma_[e], q_);
            }
        }
    }

    const GridGraph& g_;
    double p_, q_;
    std::vector<Row> rows_;
    std::vector<double> w_, rho_, inv_psigma_, wot_;
    std::vector<char> touched_;
    std::vector<int> touched_list_;
};

struct DijkstraOut {
    std::vector<double> dist;
    std::vector<int> hops;
    std::vector<int> parent_edge;
};

// Multi-source shortest paths by (rho-length, hop count) lexicographic order.
DijkstraOut dijkstra(const GridGraph& g, const std::vector<int>& sources,
                     const std::vector<char>& allowed, const std::vector<double>& edge_w) {
    const size_t m = g.nodes.size();
    DijkstraOut out;
    out.dist.assign(m, kInf);
    out.hops.assign(m, std::numeric_limits<int>::max());
    out.parent_edge.assign(m, -1);
    using Item = std::tuple<double, int, int>;  // dist, hops, node
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    for (int s : sources) {
        if (!allowed.empty() && !allowed[static_cast<size_t>(s)]) continue;
        out.dist[static_cast<size_t>(s)] = 0.0;
        out.hops[static_cast<size_t>(s)] = 0;
        pq.push({0.0, 0, s});
    }
    while (!pq.empty()) {
        auto [d, h, u] = pq.top();
        pq.pop();
        if (d > out.dist[static_cast<size_t>(u)] ||
            (d == out.dist[static_cast<size_t>(u)] && h > out.hops[static_cast<size_t>(u)]))
            continue;
        for (int eid : g.incident[static_cast<size_t>(u)]) {
            int v = g.other_end(eid, u);
            if (!allowed.empty() && !allowed[static_cast<size_t>(v)]) continue;
            double nd = d + edge_w[static_cast<size_t>(eid)];
            int nh = h + 1;
            if (nd < out.dist[static_cast<size_t>(v)] ||
                (nd == out.dist[static_cast<size_t>(v)] && nh < out.hops[static_cast<size_t>(v)])) {
                out.dist[static_cast<size_t>(v)] = nd;
                out.hops[static_cast<size_t>(v)] = nh;
                out.parent_edge[static_cast<size_t>(v)] = eid;
                pq.push({nd, nh, v});
            }
        }
    }
    return out;
}

std::vector<int> extract_path(const GridGraph& g, const DijkstraOut& dj, int sink) {
    std::vector<int> path;
    int u = sink;
    while (dj.parent_edge[static_cast<size_t>(u)] != -1) {
        int eid = dj.parent_edge[static_cast<size_t>(u)];
        path.push_back(eid);
        u = g.other_end(eid, u);
    }
    std::reverse(path.begin(), path.end());
    return path;
}

Row row_from_base_path(const GridGraph& g, const std::vector<int>& path,
                       const std::vector<std::vector<int>>* images) {
    Row r;
    r.origin.connected = true;
    std::map<int, double> coeffs;
    for (int eid : path) {
        double len = g.edges[static_cast<size_t>(eid)].len;
        r.origin.edges.push_back({eid, 1.0});
        if (!images) {
            coeffs[eid] += len;
        } else {
            std::set<int> distinct;
            for (const auto& f : *images) distinct.insert(f[static_cast<size_t>(eid)]);
            for (int ie : distinct) coeffs[ie] += len;
        }
    }
    for (const auto& [e, c] : coeffs) {
        r.idx.push_back(e);
        r.coeff.push_back(c);
    }
    return r;
}

// Potential formulation for plain connector families: the p-modulus of all
// curves joining S to T equals  min_u sum_e c_e |du_e|^p  with c_e =
// sigma_e / len_e^p, u = 0 on S, u = 1 on T.  Any u gives the admissible
// density rho_e = |du_e| / len_e (every path picks up total variation >= 1),
// and any unit-strength conserved flow q gives the Hoelder lower bound
// I^p / K^{p-1} with K = sum |q_e len_e|^{p'} sigma_e^{1-p'}.
class PotentialSolver {
  public:
    PotentialSolver(const GridGraph& g, const ConnectorFamily& fam, double p)
        : g_(g), p_(p) {
        const size_t nn = g.nodes.size();
        role_.assign(nn, -1);
        if (!fam.allowed.empty())
            for (size_t v = 0; v < nn; ++v)
                if (!fam.allowed[v]) role_[v] = 2;  // excluded
        for (int s : fam.source) role_[static_cast<size_t>(s)] = 0;
        for (int t : fam.sink) role_[static_cast<size_t>(t)] = 1;
        c_.resize(g.edges.size());
        for (size_t e = 0; e < g.edges.size(); ++e)
            c_[e] = g.edges[e].sigma / std::pow(g.edges[e].len, p);
        p_cubic_ = std::abs(p - 3.0) < 1e-12;
        u_.assign(nn, 0.0);
        for (size_t v = 0; v < nn; ++v)
            if (role_[v] == 1) u_[v] = 1.0;
        init_by_hops(fam);
    }

    bool reachable() const { return reachable_; }

    // Iterates until the certified primal-dual gap is small; returns the
    // number of iterations used.  For p != 2 the energy is minimized by
    // preconditioned nonlinear conjugate gradients (Polak-Ribiere with
    // restarts): pointwise relaxation converges far too slowly on grids with
    // strongly graded cells.
    int solve(double rel_gap_tol, int max_iters) {
        if (std::abs(p_ - 2.0) < 1e-12) return solve_cg(rel_gap_tol, max_iters);
        warm_start_from_linear();
        const size_t nn = u_.size();
        std::vector<double> grd(nn), diag(nn), pg(nn), pg_prev(nn), dir(nn, 0.0);
        std::vector<double> du(g_.edges.size()), dd(g_.edges.size());
        auto d1 = [&](double d, double ad) {
            return p_cubic_ ? d * ad : std::copysign(std::pow(ad, p_ - 1.0), d);
        };
        auto d2 = [&](double ad) {
            if (p_cubic_) return 2.0 * ad;
            return ad > 0.0 ? (p_ - 1.0) * std::pow(ad, p_ - 2.0) : 0.0;
        };
        auto compute_grad = [&]() {
            std::fill(grd.begin(), grd.end(), 0.0);
            std::fill(diag.begin(), diag.end(), 1e-30);
            for (size_t e = 0; e < g_.edges.size(); ++e) {
                if (skip(e)) continue;
                size_t a = static_cast<size_t>(g_.edges[e].u), b = static_cast<size_t>(g_.edges[e].v);
                double d = u_[a] - u_[b], ad = std::abs(d);
                double w = c_[e] * p_;
                double f1 = w * d1(d, ad), f2 = w * d2(ad);
                grd[a] += f1;
                grd[b] -= f1;
                diag[a] += f2;
                diag[b] += f2;
            }
            for (size_t v = 0; v < nn; ++v)
                if (role_[v] != -1) grd[v] = 0.0;
        };
        double gs_prev = 0.0;
        int it = 0;
        const int check_every = 25;
        while (it < max_iters) {
            ++it;
            compute_grad();
            double gs = 0.0;
            for (size_t v = 0; v < nn; ++v) {
                pg[v] = grd[v] / diag[v];
                gs += grd[v] * pg[v];
            }
            if (!(gs > 0.0)) break;  // stationary point
            double beta = 0.0;
            if (gs_prev > 0.0 && it % 50 != 1) {
                double cross = 0.0;
                for (size_t v = 0; v < nn; ++v) cross += grd[v] * (pg[v] - pg_prev[v]);
                beta = std::max(0.0, cross / gs_prev);
            }
            double dg = 0.0;
            for (size_t v = 0; v < nn; ++v) {
                dir[v] = -pg[v] + beta * dir[v];
                dg += dir[v] * grd[v];
            }
            if (!(dg < 0.0)) {  // not a descent direction: restart
                dg = -gs;
                for (size_t v = 0; v < nn; ++v) dir[v] = -pg[v];
            }
            // exact-ish line search: safeguarded Newton on the convex
            // 1-D slope  phi'(alpha) = sum_e c p |du + alpha dd|^(p-1) dd
            double curv0 = 0.0;
            for (size_t e = 0; e < g_.edges.size(); ++e) {
                if (skip(e)) { du[e] = dd[e] = 0.0; continue; }
                size_t a = static_cast<size_t>(g_.edges[e].u), b = static_cast<size_t>(g_.edges[e].v);
                du[e] = u_[a] - u_[b];
                dd[e] = dir[a] - dir[b];
                curv0 += c_[e] * p_ * d2(std::abs(du[e])) * dd[e] * dd[e];
            }
            double alpha = (curv0 > 0.0) ? -dg / curv0 : 1.0;
            double alo = 0.0, ahi = kInf;
            for (int ls = 0; ls < 12; ++ls) {
                double slope = 0.0, curv = 0.0;
                for (size_t e = 0; e < g_.edges.size(); ++e) {
                    if (dd[e] == 0.0) continue;
                    double d = du[e] + alpha * dd[e], ad = std::abs(d);
                    slope += c_[e] * p_ * d1(d, ad) * dd[e];
                    curv += c_[e] * p_ * d2(ad) * dd[e] * dd[e];
                }
                if (slope > 0.0) ahi = alpha; else alo = alpha;
                if (std::abs(slope) <= 1e-10 * std::abs(dg)) break;
                double next = (curv > 0.0) ? alpha - slope / curv : alpha;
                if (!(next > alo) || !(next < ahi))
                    next = std::isfinite(ahi) ? 0.5 * (alo + ahi) : 2.0 * alpha;
                if (next == alpha) break;
                alpha = next;
            }
            for (size_t v = 0; v < nn; ++v)
                if (role_[v] == -1) u_[v] += alpha * dir[v];
            gs_prev = gs;
            pg_prev = pg;
            if (it % check_every == 0 || it == max_iters) {
                double up = energy(), lo = flow_lower_bound();
                best_lower_ = std::max(best_lower_, lo);
                if (up - best_lower_ <= rel_gap_tol * std::max(up, 1e-300)) break;
            }
        }
        best_lower_ = std::max(best_lower_, flow_lower_bound());
        return it;
    }

    // The p = 2 potential is a cheap, shape-accurate starting point for the
    // nonlinear sweeps.
    void warm_start_from_linear() {
        double p_save = p_;
        std::vector<double> c_save = c_;
        p_ = 2.0;
        for (size_t e = 0; e < g_.edges.size(); ++e)
            c_[e] = g_.edges[e].sigma / (g_.edges[e].len * g_.edges[e].len);
        solve_cg(1e-8, 4000);
        p_ = p_save;
        c_ = std::move(c_save);
        best_lower_ = 0.0;  // the linear-stage bound used the wrong exponent
    }

    // Conjugate gradients on the weighted Laplacian (p = 2 only).
    int solve_cg(double rel_gap_tol, int max_iters) {
        std::vector<int> free_nodes;
        for (int v = 0; v < static_cast<int>(u_.size()); ++v)
            if (role_[static_cast<size_t>(v)] == -1) free_nodes.push_back(v);
        const size_t nf = free_nodes.size();
        if (nf == 0) return 0;
        std::vector<int> idx(u_.size(), -1);
        for (size_t i = 0; i < nf; ++i) idx[static_cast<size_t>(free_nodes[i])] = static_cast<int>(i);
        auto apply = [&](const std::vector<double>& x, std::vector<double>& out) {
            for (size_t i = 0; i < nf; ++i) {
                int v = free_nodes[i];
                double acc = 0.0;
                for (int e : g_.incident[static_cast<size_t>(v)]) {
                    int w = g_.other_end(e, v);
                    if (role_[static_cast<size_t>(w)] == 2) continue;
                    double xw = (idx[static_cast<size_t>(w)] >= 0)
                                    ? x[static_cast<size_t>(idx[static_cast<size_t>(w)])]
                                    : 0.0;
                    acc += c_[static_cast<size_t>(e)] * (x[i] - xw);
                }
                out[i] = acc;
            }
        };
        std::vector<double> x(nf), b(nf, 0.0), r(nf), pdir(nf), ap(nf);
        for (size_t i = 0; i < nf; ++i) x[i] = u_[static_cast<size_t>(free_nodes[i])];
        for (size_t i = 0; i < nf; ++i) {
            int v = free_nodes[i];
            for (int e : g_.incident[static_cast<size_t>(v)]) {
                int w = g_.other_end(e, v);
                if (role_[static_cast<size_t>(w)] == 2 || role_[static_cast<size_t>(w)] == -1)
                    continue;
                b[i] += c_[static_cast<size_t>(e)] * u_[static_cast<size_t>(w)];
            }
        }
        apply(x, ap);
        for (size_t i = 0; i < nf; ++i) r[i] = b[i] - ap[i];
        pdir = r;
        double rr = 0.0;
        for (double v : r) rr += v * v;
        int it = 0;
        const int check_every = 50;
        while (it < max_iters && rr > 0.0) {
            ++it;
            apply(pdir, ap);
            double pap = 0.0;
            for (size_t i = 0; i < nf; ++i) pap += pdir[i] * ap[i];
            if (!(pap > 0.0)) break;
            double alpha = rr / pap;
            for (size_t i = 0; i < nf; ++i) {
                x[i] += alpha * pdir[i];
                r[i] -= alpha * ap[i];
            }
            double rr2 = 0.0;
            for (double v : r) rr2 += v * v;
            double beta = rr2 / rr;
            rr = rr2;
            for (size_t i = 0; i < nf; ++i) pdir[i] = r[i] + beta * pdir[i];
            if (it % check_every == 0 || it == max_iters) {
                for (size_t i = 0; i < nf; ++i) u_[static_cast<size_t>(free_nodes[i])] = x[i];
                double up = energy(), lo = flow_lower_bound();
                best_lower_ = std::max(best_lower_, lo);
                if (up - best_lower_ <= rel_gap_tol * std::max(up, 1e-300)) return it;
            }
        }
        for (size_t i = 0; i < nf; ++i) u_[static_cast<size_t>(free_nodes[i])] = x[i];
        best_lower_ = std::max(best_lower_, flow_lower_bound());
        return it;
    }

    double energy() const {
        double E = 0.0;
        for (size_t e = 0; e < g_.edges.size(); ++e) {
            if (skip(e)) continue;
            E += c_[e] * std::pow(std::abs(u_[static_cast<size_t>(g_.edges[e].u)] -
                                           u_[static_cast<size_t>(g_.edges[e].v)]),
                                  p_);
        }
        return E;
    }

    double best_lower() const { return best_lower_; }

    std::vector<double> density() const {
        std::vector<double> rho(g_.edges.size(), 0.0);
        for (size_t e = 0; e < g_.edges.size(); ++e) {
            if (skip(e)) continue;
            rho[e] = std::abs(u_[static_cast<size_t>(g_.edges[e].u)] -
                              u_[static_cast<size_t>(g_.edges[e].v)]) /
                     g_.edges[e].len;
        }
        return rho;
    }

    // Certified lower bound from the conserved repair of the numerical flux.
    double flow_lower_bound() const {
        std::vector<double> q(g_.edges.size(), 0.0);  // oriented u -> v
        for (size_t e = 0; e < g_.edges.size(); ++e) {
            if (skip(e)) continue;
            double du = u_[static_cast<size_t>(g_.edges[e].u)] -
                        u_[static_cast<size_t>(g_.edges[e].v)];
            q[e] = c_[e] * std::copysign(std::pow(std::abs(du), p_ - 1.0), du);
        }
        // push free-node divergence residuals to the sink along the hop tree
        std::vector<double> res(u_.size(), 0.0);
        for (size_t e = 0; e < g_.edges.size(); ++e) {
            if (skip(e)) continue;
            res[static_cast<size_t>(g_.edges[e].u)] -= q[e];
            res[static_cast<size_t>(g_.edges[e].v)] += q[e];
        }
        for (int v : hop_order_) {  // decreasing distance from the sink
            if (role_[static_cast<size_t>(v)] != -1) continue;
            int e = tree_edge_[static_cast<size_t>(v)];
            if (e < 0) continue;
            // send the residual toward the tree parent (closer to the sink)
            double r = res[static_cast<size_t>(v)];
            if (g_.edges[static_cast<size_t>(e)].v == v)
                q[static_cast<size_t>(e)] -= r;
            else
                q[static_cast<size_t>(e)] += r;
            res[static_cast<size_t>(v)] = 0.0;
            res[static_cast<size_t>(g_.other_end(e, v))] += r;
        }
        double I = 0.0;
        for (size_t e = 0; e < g_.edges.size(); ++e) {
            if (skip(e)) continue;
            int ru = role_[static_cast<size_t>(g_.edges[e].u)];
            int rv = role_[static_cast<size_t>(g_.edges[e].v)];
            if (rv == 1 && ru != 1) I += q[e];
            if (ru == 1 && rv != 1) I -= q[e];
        }
        I = std::abs(I);  // conservation holds at free nodes; only the sign of
                          // the orientation convention varies
        if (!(I > 0.0)) return 0.0;
        const double pc = p_ / (p_ - 1.0);
        double K = 0.0;
        for (size_t e = 0; e < g_.edges.size(); ++e) {
            if (skip(e) || q[e] == 0.0) continue;
            K += std::pow(std::abs(q[e]) * g_.edges[e].len, pc) *
                 std::pow(g_.edges[e].sigma, 1.0 - pc);
        }
        if (!(K > 0.0) || !std::isfinite(K)) return 0.0;
        return std::pow(I, p_) / std::pow(K, p_ - 1.0);
    }

  private:
    bool skip(size_t e) const {
        return role_[static_cast<size_t>(g_.edges[e].u)] == 2 ||
               role_[static_cast<size_t>(g_.edges[e].v)] == 2;
    }

    void init_by_hops(const ConnectorFamily& fam) {
        // BFS hop distances from source and sink; linear interpolation as the
        // starting potential, plus the repair tree toward the sink.
        auto bfs = [&](const std::vector<int>& seeds, std::vector<int>& dist,
                       std::vector<int>* tree) {
            dist.assign(u_.size(), -1);
            std::vector<int> queue;
            for (int s : seeds)
                if (role_[static_cast<size_t>(s)] != 2) {
                    dist[static_cast<size_t>(s)] = 0;
                    queue.push_back(s);
                }
            for (size_t head = 0; head < queue.size(); ++head) {
                int v = queue[head];
                for (int e : g_.incident[static_cast<size_t>(v)]) {
                    int w = g_.other_end(e, v);
                    if (role_[static_cast<size_t>(w)] == 2) continue;
                    if (dist[static_cast<size_t>(w)] != -1) continue;
                    dist[static_cast<size_t>(w)] = dist[static_cast<size_t>(v)] + 1;
                    if (tree) (*tree)[static_cast<size_t>(w)] = e;
                    queue.push_back(w);
                }
            }
        };
        std::vector<int> ds, dt;
        tree_edge_.assign(u_.size(), -1);
        bfs(fam.source, ds, nullptr);
        bfs(fam.sink, dt, &tree_edge_);
        reachable_ = false;
        for (int s : fam.source)
            if (dt[static_cast<size_t>(s)] != -1) reachable_ = true;
        hop_order_.clear();
        for (int v = 0; v < static_cast<int>(u_.size()); ++v) {
            if (role_[static_cast<size_t>(v)] != -1) continue;
            if (ds[static_cast<size_t>(v)] == -1 || dt[static_cast<size_t>(v)] == -1) {
                role_[static_cast<size_t>(v)] = 2;  // dead end: not on any curve
                continue;
            }
            u_[static_cast<size_t>(v)] =
                static_cast<double>(ds[static_cast<size_t>(v)]) /
                (ds[static_cast<size_t>(v)] + dt[static_cast<size_t>(v)]);
            hop_order_.push_back(v);
        }
        std::sort(hop_order_.begin(), hop_order_.end(), [&](int a, int b) {
            return dt[static_cast<size_t>(a)] > dt[static_cast<size_t>(b)];
        });
    }


    const GridGraph& g_;
    double p_;
    bool p_cubic_ = false;
    std::vector<int> role_;  // -1 free, 0 source, 1 sink, 2 excluded
    std::vector<double> c_, u_;
    std::vector<int> hop_order_, tree_edge_;
    double best_lower_ = 0.0;
    bool reachable_ = false;
};

}  // namespace

double curve_length(const Curve& c, const GridGraph& g, const std::vector<double>& rho) {
    double L = 0.0;
    for (const auto& [e, w] : c.edges)
        L += w * g.edges[static_cast<size_t>(e)].len * rho[static_cast<size_t>(e)];
    return L;
}

double density_energy(const GridGraph& g, const std::vector<double>& rho, double p) {
    double E = 0.0;
    for (size_t e = 0; e < g.edges.size(); ++e) E += g.edges[e].sigma * std::pow(rho[e], p);
    return E;
}

ModulusResult solve_modulus(const GridGraph& g, const CurveFamily& family, double p,
                            const SolveOptions& opt) {
    DualAscent solver(g, p);
    ModulusResult res;
    res.density.assign(g.edges.size(), 0.0);

    auto finish = [&](double lmin) {
        res.lower_bound = std::max(0.0, solver.dual_value());
        res.certified_gap = std::max(0.0, 1.0 - lmin);
        res.density = solver.rho();
        for (const Row& r : solver.rows()) res.active_curves.push_back(r.origin);
        if (lmin > 0.0 && std::isfinite(lmin)) {
            for (double& x : res.density) x /= lmin;
            res.value = solver.energy() / std::pow(lmin, p);
        } else {
            res.value = kInf;
        }
        return res;
    };

    if (const auto* ef = std::get_if<ExplicitFamily>(&family)) {
        if (ef->curves.empty()) return res;  // empty family: modulus 0
        for (const Curve& c : ef->curves) {
            Row r;
            r.origin = c;
            std::map<int, double> coeffs;
            for (const auto& [e, w] : c.edges) {
                if (e < 0 || e >= static_cast<int>(g.edges.size()))
                    throw std::invalid_argument("curve references unknown edge");
                if (w > 0.0) coeffs[e] += w * g.edges[static_cast<size_t>(e)].len;
            }
            for (const auto& [e, cc] : coeffs) {
                r.idx.push_back(e);
                r.coeff.push_back(cc);
            }
            solver.add_row(std::move(r));
        }
        res.iterations = solver.solve(opt.inner_tol, opt.max_sweeps);
        return finish(solver.min_row_length());
    }

    if (const auto* cf = std::get_if<ConnectorFamily>(&family)) {
        if (cf->source.empty() || cf->sink.empty())
            throw std::invalid_argument("connector family needs source and sink nodes");
        {
            std::set<int> src(cf->source.begin(), cf->source.end());
            for (int s : cf->sink)
                if (src.count(s)) throw std::invalid_argument("source and sink overlap");
        }
        PotentialSolver ps(g, *cf, p);
        if (!ps.reachable()) return res;  // no connecting curve: modulus 0
        res.iterations = ps.solve(opt.inner_tol, opt.max_sweeps);
        res.density = ps.density();
        res.lower_bound = ps.best_lower();
        // the shortest rho-path normalizes the admissible density
        std::vector<double> edge_w(g.edges.size(), 0.0);
        for (size_t e = 0; e < g.edges.size(); ++e)
            edge_w[e] = res.density[e] * g.edges[e].len;
        DijkstraOut dj = dijkstra(g, cf->source, cf->allowed, edge_w);
        double lmin = kInf;
        int best_sink = -1;
        for (int s : cf->sink)
            if (dj.dist[static_cast<size_t>(s)] < lmin) {
                lmin = dj.dist[static_cast<size_t>(s)];
                best_sink = s;
            }
        if (!(lmin > 0.0) || !std::isfinite(lmin))
            throw std::runtime_error("connector family degenerated");
        res.certified_gap = std::abs(1.0 - lmin);
        for (double& x : res.density) x /= lmin;
        res.value = density_energy(g, res.density, p);
        Curve geo;
        for (int eid : extract_path(g, dj, best_sink)) geo.edges.push_back({eid, 1.0});
        res.active_curves.push_back(std::move(geo));
        return res;
    }

    const ConnectorFamily* base = nullptr;
    const std::vector<std::vector<int>>* images = nullptr;
    {
        const auto& sf = std::get<SymmetrizedFamily>(family);
        base = &sf.base;
        images = &sf.edge_images;
        for (const auto& f : *images)
            if (f.size() != g.edges.size())
                throw std::invalid_argument("edge image has wrong size");
    }
    if (base->source.empty() || base->sink.empty())
        throw std::invalid_argument("connector family needs source and sink nodes");
    {
        std::set<int> src(base->source.begin(), base->source.end());
        for (int s : base->sink)
            if (src.count(s)) throw std::invalid_argument("source and sink overlap");
    }

    std::vector<double> edge_w(g.edges.size(), 0.0);
    std::set<std::vector<int>> seen;
    double lmin = 0.0;
    int polish = 0;
    for (int round = 0; round < opt.max_outer; ++round) {
        ++res.iterations;
        // separation: min rho-length of a family curve
        const std::vector<double>& rho = solver.rho();
        for (size_t e = 0; e < g.edges.size(); ++e) {
            double r = 0.0;
            if (!images) {
                r = rho[e];
            } else {
                for (const auto& f : *images) r += rho[static_cast<size_t>(f[e])];
            }
            edge_w[e] = r * g.edges[e].len;
        }
        DijkstraOut dj = dijkstra(g, base->source, base->allowed, edge_w);
        std::vector<std::pair<double, int>> violated;
        lmin = kInf;
        for (int s : base->sink) {
            double d = dj.dist[static_cast<size_t>(s)];
            lmin = std::min(lmin, d);
            if (d < 1.0 - opt.tol) violated.push_back({d, s});
        }
        if (!std::isfinite(lmin)) {
            if (round == 0) return res;  // no connecting curve at all: modulus 0
            throw std::runtime_error("connector family became disconnected");
        }
        std::sort(violated.begin(), violated.end());
        int added = 0;
        for (const auto& [d, s] : violated) {
            if (added >= opt.batch) break;
            std::vector<int> path = extract_path(g, dj, s);
            std::vector<int> key = path;
            std::sort(key.begin(), key.end());
            if (!seen.insert(std::move(key)).second) continue;
            solver.add_row(row_from_base_path(g, path, images));
            ++added;
        }
        if (added == 0) {
            // no new cut: tighten the active set fully, then re-separate
            if (polish++ >= 2) break;
            solver.solve(opt.inner_tol, opt.max_sweeps);
        } else {
            // coarse re-optimization is enough while cuts are still arriving
            solver.solve(opt.inner_tol * 50.0, 400);
        }
    }
    return finish(lmin);
}

std::vector<int> node_permutation(const GridGraph& g,
                                  const std::function<Point(const Point&)>& iso) {
    double scale = 1.0;
    for (const Point& pt : g.nodes)
        for (double c : pt.c) scale = std::max(scale, std::abs(c));
    const double cell = 1e-6 * scale;
    std::map<std::vector<long long>, std::vector<int>> buckets;
    auto key_of = [&](const Point& pt) {
        std::vector<long long> k(pt.c.size());
        for (size_t i = 0; i < pt.c.size(); ++i)
            k[i] = static_cast<long long>(std::floor(pt.c[i] / cell));
        return k;
    };
    for (int i = 0; i < static_cast<int>(g.nodes.size()); ++i)
        buckets[key_of(g.nodes[static_cast<size_t>(i)])].push_back(i);

    std::vector<int> perm(g.nodes.size(), -1);
    for (int i = 0; i < static_cast<int>(g.nodes.size()); ++i) {
        Point img = iso(g.nodes[static_cast<size_t>(i)]);
        std::vector<long long> k0 = key_of(img);
        int found = -1;
        std::vector<long long> k = k0;
        // probe the bucket of the image point and its neighbors
        const int n = static_cast<int>(k0.size());
        std::vector<int> off(static_cast<size_t>(n), -1);
        while (true) {
            for (int d = 0; d < n; ++d) k[static_cast<size_t>(d)] = k0[static_cast<size_t>(d)] + off[static_cast<size_t>(d)];
            auto it = buckets.find(k);
            if (it != buckets.end())
                for (int cand : it->second)
                    if (dist(g.nodes[static_cast<size_t>(cand)], img) < 2.0 * cell) found = cand;
            int d = n - 1;
            while (d >= 0 && off[static_cast<size_t>(d)] == 1) off[static_cast<size_t>(d--)] = -1;
            if (d < 0) break;
            ++off[static_cast<size_t>(d)];
        }
        if (found < 0) throw std::runtime_error("isometry does not map the grid onto itself");
        perm[static_cast<size_t>(i)] = found;
    }
    return perm;
}

std::vector<int> edge_permutation(const GridGraph& g, const std::vector<int>& node_perm) {
    std::vector<int> out(g.edges.size(), -1);
    for (size_t e = 0; e < g.edges.size(); ++e) {
        int u = node_perm[static_cast<size_t>(g.edges[e].u)];
        int v = node_perm[static_cast<size_t>(g.edges[e].v)];
        int ie = g.find_edge(u, v);
        if (ie < 0) throw std::runtime_error("isometry does not preserve grid edges");
        out[e] = ie;
    }
    return out;
}

std::vector<std::vector<int>> dihedral_edge_images(const GridGraph& g, int m) {
    if (m < 1) throw std::invalid_argument("dihedral order must be positive");
    if (g.kind != GridGraph::Kind::Cylindrical || g.n_theta % (2 * m) != 0)
        throw std::invalid_argument("grid angular count must be a multiple of 2m");
    std::vector<std::vector<int>> images;
    for (int j = 0; j < m; ++j) {
        double beta = 2.0 * kPi * j / m;
        auto rot = [beta](const Point& x) { return rotate(x, beta); };
        images.push_back(edge_permutation(g, node_permutation(g, rot)));
    }
    for (int j = 0; j < m; ++j) {
        double alpha = kPi * j / m;  // reflection across the line theta = alpha
        double c2 = std::cos(2.0 * alpha), s2 = std::sin(2.0 * alpha);
        auto refl = [c2, s2](const Point& x) {
            Point y = x;
            y.c[0] = c2 * x.c[0] + s2 * x.c[1];
            y.c[1] = s2 * x.c[0] - c2 * x.c[1];
            return y;
        };
        images.push_back(edge_permutation(g, node_permutation(g, refl)));
    }
    return images;
}

nlohmann::json family_to_json(const GridGraph& g, const CurveFamily& family) {
    nlohmann::json j;
    j["schema"] = "modrad.family.v1";
    if (const auto* ef = std::get_if<ExplicitFamily>(&family)) {
        j["type"] = "explicit";
        nlohmann::json arr = nlohmann::json::array();
        for (const Curve& c : ef->curves) {
            nlohmann::json jc;
            jc["connected"] = c.connected;
            nlohmann::json je = nlohmann::json::array();
            for (const auto& [e, w] : c.edges) je.push_back({{"edge", e}, {"weight", w}});
            jc["edges"] = std::move(je);
            arr.push_back(std::move(jc));
        }
        j["curves"] = std::move(arr);
    } else if (const auto* cf = std::get_if<ConnectorFamily>(&family)) {
        j["type"] = "connector";
        j["source"] = cf->source;
        j["sink"] = cf->sink;
        if (!cf->allowed.empty()) {
            std::vector<int> allowed_nodes;
            for (int i = 0; i < static_cast<int>(cf->allowed.size()); ++i)
                if (cf->allowed[static_cast<size_t>(i)]) allowed_nodes.push_back(i);
            j["allowed"] = allowed_nodes;
        }
    } else {
        const auto& sf = std::get<SymmetrizedFamily>(family);
        j["type"] = "symmetrized";
        j["base"] = family_to_json(g, CurveFamily{sf.base});
        j["orbit_size"] = sf.edge_images.size();
    }
    return j;
}

}  // namespace modrad
