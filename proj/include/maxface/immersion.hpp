#pragma once

#include <cstdio>
#include <iomanip>
#include <ostream>

#include "analysis.hpp"

namespace maxface {

using Vec3 = std::array<double, 3>;

inline double vec3_dist(const Vec3& a, const Vec3& b) {
    return std::sqrt((a[0] - b[0]) * (a[0] - b[0]) + (a[1] - b[1]) * (a[1] - b[1]) +
                     (a[2] - b[2]) * (a[2] - b[2]));
}

inline double vec3_norm(const Vec3& a) {
    return std::sqrt(a[0] * a[0] + a[1] * a[1] + a[2] * a[2]);
}

struct MeshVertex {
    SurfacePoint p;
    int sheet = 0;
    Vec3 pos{0.0, 0.0, 0.0};
    double conformal_factor = 0.0;
    double abs_g = 0.0;
};

struct SurfaceMesh {
    std::string label;
    int n_rho = 0, n_theta = 0, sheets = 1;
    std::vector<double> rho_values;    // n_rho + 1 rows
    std::vector<double> theta_values;  // n_theta columns
    std::vector<MeshVertex> vertices;
    std::vector<std::array<int, 4>> quads;
    std::vector<uint8_t> radial_flip;  // (j, k): sheet flip along (j,k)-(j+1,k)
    std::vector<uint8_t> wrap_flip;    // row j: flip along the theta wrap edge
    int skipped_cells = 0;
    std::vector<std::pair<int, int>> involution_pairs;
    std::vector<std::vector<Vec3>> singular_polylines;

    int index(int j, int k, int s) const { return (j * n_theta + k) * sheets + s; }

    void write_obj(std::ostream& os) const {
        char buf[128];
        for (const auto& v : vertices) {
            std::snprintf(buf, sizeof buf, "v %.17g %.17g %.17g\n", v.pos[0], v.pos[1],
                          v.pos[2]);
            os << buf;
        }
        for (const auto& q : quads)
            os << "f " << q[0] + 1 << ' ' << q[1] + 1 << ' ' << q[2] + 1 << ' ' << q[3] + 1
               << '\n';
    }

    nlohmann::json singular_json() const {
        nlohmann::json lines = nlohmann::json::array();
        for (const auto& pl : singular_polylines) {
            nlohmann::json line = nlohmann::json::array();
            for (const Vec3& p : pl) line.push_back({p[0], p[1], p[2]});
            lines.push_back(std::move(line));
        }
        return {{"polylines", std::move(lines)}};
    }
};

struct MeshOptions {
    int n_rho = 64;
    int n_theta = 64;
    double rho_min = -2.5;
    double rho_max = 2.5;
    bool with_singular = false;
    int singular_grid = 96;
};

struct SymmetryCheckResult {
    int transform = 0;            // 0: (z,w)->(z,-w); 1: conjugation; 2: their composition
    std::string axis;             // rotation axis in L^3
    std::array<double, 3> rho_diag{1.0, 1.0, 1.0};
    Vec3 translation{0.0, 0.0, 0.0};
    double max_deviation = 0.0;
    int samples = 0;
};

struct BuildError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Integrates X = Re int (phi1, phi2, phi3) from a fixed basepoint. Refuses
// data with unresolved periods or branch points unless allow_defect is set.
class ImmersionEngine {
public:
    static ImmersionEngine build(const WeierstrassData& data, const QuadratureConfig& cfg = {},
                                 bool allow_defect = false) {
        ImmersionEngine e;
        e.d_ = data;
        e.cfg_ = cfg;
        e.phis_ = phi_vector(data);
        e.report_ = period_report(data, cfg);
        if (!e.report_.well_defined && !allow_defect) {
            std::ostringstream os;
            os << "periods do not close; first failing loop: ";
            bool found = false;
            for (const auto& L : e.report_.loops)
                if (!L.ok && !found) {
                    os.precision(6);
                    os << L.name << " (horizontal " << std::abs(L.horizontal) << ", vertical "
                       << std::abs(L.vertical) << ")";
                    found = true;
                }
            for (const auto& E : e.report_.ends)
                if (!E.ok && !found) {
                    os << "residue at " << E.where;
                    found = true;
                }
            throw BuildError(os.str());
        }
        RegularityScan reg = regularity_scan(data, 400);
        if (!reg.immersed && !allow_defect) {
            std::ostringstream os;
            os << "map has branch points (";
            for (size_t i = 0; i < reg.branch_points.size(); ++i)
                os << (i ? "; " : "") << reg.branch_points[i].describe();
            os << "); pass the demo flag to proceed";
            throw BuildError(os.str());
        }

        e.base_.z = 2.0;
        const Domain& dom = data.domain;
        // z = 2 can collide with a branch point or puncture (the Klein curve
        // at r = 1/2 branches there); slide along the positive axis until the
        // whole special set, and every circle through it, stays clear.
        for (double c : {2.0, 2.4, 1.6, 2.8, 1.3, 3.4}) {
            double worst = 1e300;
            for (cplx q : dom.finite_special_points())
                worst = std::min(worst, std::abs(std::abs(q) - c));
            if (worst >= 0.2) {
                e.base_.z = c;
                break;
            }
        }
        if (!dom.on_plane()) {
            e.base_.w = dom.sqrt_fiber(e.base_.z);
            // A loop around one finite branch point swaps the sheet over the
            // basepoint; used to reach the other sheet.
            cplx bf = dom.finite_branch_points().back();
            for (cplx b : dom.finite_branch_points())
                if (detail::isolation_radius(dom, b) >
                    detail::isolation_radius(dom, bf))
                    bf = b;
            double rho = 0.3 * detail::isolation_radius(dom, bf);
            double side = (std::abs(e.base_.z - (bf - rho)) <= std::abs(e.base_.z - (bf + rho)))
                              ? M_PI
                              : 0.0;
            cplx vertex = bf + std::polar(rho, side);
            e.flip_spec_.segments = {Segment::line(e.base_.z, vertex),
                                     Segment::arc(bf, rho, rho, side, side + 2.0 * M_PI),
                                     Segment::line(vertex, e.base_.z)};
            LiftOptions lo;
            lo.start_w = e.base_.w;
            lo.init_samples = 128;
            LiftedPath loop = lift_path(dom, e.flip_spec_, lo);
            if (std::abs(loop.end_w() + e.base_.w) > std::abs(loop.end_w() - e.base_.w))
                throw BuildError("flip loop did not change the sheet");
            for (int j = 0; j < 3; ++j)
                e.flip_offset_[j] = integrate_form(loop, e.phis_[j], cfg).value;
        }
        return e;
    }

    const WeierstrassData& data() const { return d_; }
    const PeriodReport& period_verdict() const { return report_; }
    const SurfacePoint& basepoint() const { return base_; }

    Vec3 evaluate(const SurfacePoint& p) const {
        const Domain& dom = d_.domain;
        PathSpec spec = path_to(p.z);
        LiftOptions lo;
        bool curve = !dom.on_plane();
        if (curve) {
            cplx fv = dom.curve()->value_or_throw(p.z);
            if (std::abs(p.w * p.w - fv) > 1e-6 * (1.0 + std::abs(fv)))
                throw std::invalid_argument("target point is not on the curve");
            lo.start_w = base_.w;
        }
        LiftedPath lp = lift_path(dom, spec, lo);
        std::array<cplx, 3> acc{};
        if (curve &&
            std::abs(lp.end_w() - p.w) > std::abs(lp.end_w() + p.w)) {
            PathSpec full = flip_spec_;
            for (const auto& s : spec.segments) full.segments.push_back(s);
            lp = lift_path(dom, full, lo);
        }
        for (int j = 0; j < 3; ++j) acc[j] = integrate_form(lp, phis_[j], cfg_).value;
        return {acc[0].real(), acc[1].real(), acc[2].real()};
    }

    // Integral along an explicit path (homotopy experiments); the path is
    // expected to start at the basepoint.
    Vec3 evaluate_along(const PathSpec& spec) const {
        LiftOptions lo;
        if (!d_.domain.on_plane()) lo.start_w = base_.w;
        LiftedPath lp = lift_path(d_.domain, spec, lo);
        Vec3 out{};
        for (int j = 0; j < 3; ++j)
            out[j] = integrate_form(lp, phis_[j], cfg_).value.real();
        return out;
    }

    SurfaceMesh sample_mesh(const MeshOptions& opt) const;

    SymmetryCheckResult symmetry_check(int which, int n_samples = 60) const {
        if (d_.domain.on_plane())
            throw std::invalid_argument("the symmetry transforms act on the curve model");
        SymmetryCheckResult res;
        res.transform = which;
        switch (which) {
            case 0:
                res.rho_diag = {-1.0, -1.0, 1.0};
                res.axis = "x3";
                break;
            case 1:
                res.rho_diag = {1.0, -1.0, -1.0};
                res.axis = "x1";
                break;
            case 2:
                res.rho_diag = {-1.0, 1.0, -1.0};
                res.axis = "x2";
                break;
            default:
                throw std::invalid_argument("transform index must be 0, 1 or 2");
        }
        auto transform = [&](const SurfacePoint& p) -> SurfacePoint {
            switch (which) {
                case 0:
                    return {p.z, -p.w};
                case 1:
                    return {std::conj(p.z), std::conj(p.w)};
                default:
                    return {std::conj(p.z), -std::conj(p.w)};
            }
        };

        auto samples = domain_samples(d_.domain, n_samples);
        std::vector<Vec3> lhs, rhs;
        for (const auto& p : samples) {
            Vec3 xp = evaluate(p);
            Vec3 xq = evaluate(transform(p));
            Vec3 rot{res.rho_diag[0] * xp[0], res.rho_diag[1] * xp[1], res.rho_diag[2] * xp[2]};
            lhs.push_back(rot);
            rhs.push_back(xq);
        }
        Vec3 c{0.0, 0.0, 0.0};
        for (size_t i = 0; i < lhs.size(); ++i)
            for (int j = 0; j < 3; ++j) c[j] += (rhs[i][j] - lhs[i][j]) / double(lhs.size());
        res.translation = c;
        for (size_t i = 0; i < lhs.size(); ++i) {
            Vec3 fitted{lhs[i][0] + c[0], lhs[i][1] + c[1], lhs[i][2] + c[2]};
            res.max_deviation = std::max(res.max_deviation, vec3_dist(fitted, rhs[i]));
        }
        res.samples = int(lhs.size());
        return res;
    }

private:
    PathSpec path_to(cplx target) const {
        const double R0 = std::abs(base_.z);
        double theta = std::arg(target);
        double rt = std::abs(target);
        PathSpec spec;
        const Domain& dom = d_.domain;
        double clearance = 2e-3 * dom.spread();

        // If the radial leg would brush a branch point, descend at a shifted
        // angle and close with an arc at the target radius.
        double theta_leg = theta;
        if (!dom.on_plane()) {
            for (cplx b : dom.finite_branch_points()) {
                double rb = std::abs(b);
                if (rb < 1e-12) continue;
                double lo = std::min(rt, R0), hi = std::max(rt, R0);
                if (rb < lo - clearance || rb > hi + clearance) continue;
                double dth = std::remainder(theta - std::arg(b), 2.0 * M_PI);
                double need = 3.0 * clearance / rb;
                if (std::abs(dth) < need)
                    theta_leg = std::arg(b) + (dth >= 0.0 ? need : -need);
            }
        }

        spec.segments.push_back(Segment::arc(0.0, R0, R0, 0.0, theta_leg));
        spec.segments.push_back(
            Segment::line(std::polar(R0, theta_leg), std::polar(rt, theta_leg)));
        if (theta_leg != theta)
            spec.segments.push_back(Segment::arc(0.0, rt, rt, theta_leg, theta));
        return spec;
    }

    WeierstrassData d_;
    QuadratureConfig cfg_;
    PeriodReport report_;
    std::array<CurveFunction, 3> phis_;
    SurfacePoint base_{cplx(2.0), cplx(0.0)};
    PathSpec flip_spec_;
    std::array<cplx, 3> flip_offset_{};

    struct EdgeIntegrals {
        std::array<cplx, 3> A{};  // w-independent part
        std::array<cplx, 3> B{};  // w-proportional part, on the tree sheet
        cplx w_end{0.0};
    };

    EdgeIntegrals edge_integrals(const Segment& seg, cplx w_start) const;
};

inline ImmersionEngine::EdgeIntegrals ImmersionEngine::edge_integrals(const Segment& seg,
                                                                      cplx w_start) const {
    EdgeIntegrals out;
    const Domain& dom = d_.domain;
    PathSpec one;
    one.segments = {seg};
    LiftOptions lo;
    lo.init_samples = 24;
    if (!dom.on_plane()) lo.start_w = w_start;
    LiftedPath lp = lift_path(dom, one, lo);
    out.w_end = lp.end_w();
    for (int j = 0; j < 3; ++j) {
        const auto& F = phis_[j];
        out.A[j] = integrate_gk(
                       [&](double u) { return F.a.value_or_throw(seg.point(u)) * seg.velocity(u); },
                       0.0, 1.0, cfg_)
                       .value;
        if (!dom.on_plane() && !F.b.is_zero())
            out.B[j] = integrate_gk(
                           [&](double u) {
                               cplx z = seg.point(u);
                               return F.b.value_or_throw(z) * lp.w_at(u) * seg.velocity(u);
                           },
                           0.0, 1.0, cfg_)
                           .value;
    }
    return out;
}

inline SurfaceMesh ImmersionEngine::sample_mesh(const MeshOptions& opt) const {
    const Domain& dom = d_.domain;
    const bool curve = !dom.on_plane();
    SurfaceMesh mesh;
    mesh.label = d_.label;
    mesh.n_rho = opt.n_rho;
    mesh.n_theta = opt.n_theta;
    mesh.sheets = curve ? 2 : 1;
    if (opt.n_theta % 2 != 0) throw std::invalid_argument("theta resolution must be even");

    const int J = opt.n_rho;
    const int N = opt.n_theta;
    const double dr = (opt.rho_max - opt.rho_min) / J;
    const double dt = 2.0 * M_PI / N;

    mesh.rho_values.resize(J + 1);
    for (int j = 0; j <= J; ++j) mesh.rho_values[j] = opt.rho_min + j * dr;
    mesh.theta_values.resize(N);
    for (int k = 0; k < N; ++k) mesh.theta_values[k] = (k + 0.5) * dt;

    // Push rows off the branch radii, keeping the row set symmetric so the
    // antipodal map keeps sending grid points to grid points.
    if (curve) {
        for (cplx b : dom.finite_branch_points()) {
            double ab = std::abs(b);
            if (ab < 1e-12) continue;
            double lb = std::log(ab);
            double need = (2.5e-3 * dom.spread()) / ab;
            for (int j = 0; j <= J; ++j) {
                double gap = mesh.rho_values[j] - lb;
                if (std::abs(gap) >= need) continue;
                int mirror = J - j;
                if (mirror == j)
                    throw std::invalid_argument(
                        "grid row sits on a branch radius and cannot be moved symmetrically");
                double shift = (gap >= 0.0 ? need - gap : -need - gap);
                mesh.rho_values[j] += shift;
                mesh.rho_values[mirror] -= shift;
            }
        }
    }

    auto grid_z = [&](int j, int k) {
        return std::exp(cplx(mesh.rho_values[j], mesh.theta_values[k]));
    };

    // Path tree: basepoint -> arc at the basepoint radius to theta_0 -> spoke
    // along theta_0 through all rows -> per-row arcs sweeping k.
    const double theta0 = mesh.theta_values[0];
    const double R0 = std::abs(base_.z);
    const double rho_b = std::log(R0);

    std::array<cplx, 3> base_acc{};
    std::array<cplx, 3> base_flip{};
    cplx w_cursor = curve ? base_.w : cplx(0.0);
    {
        Segment base_arc = Segment::arc(0.0, R0, R0, 0.0, theta0);
        EdgeIntegrals e = edge_integrals(base_arc, w_cursor);
        for (int j = 0; j < 3; ++j) {
            base_acc[j] = e.A[j] + e.B[j];
            base_flip[j] = e.A[j] - e.B[j];
        }
        w_cursor = e.w_end;
    }

    std::vector<std::array<cplx, 3>> spoke_acc(J + 1);
    std::vector<std::array<cplx, 3>> spoke_acc_flip(J + 1);
    std::vector<cplx> spoke_w(J + 1);
    {
        // Insertion point of the basepoint radius within the rows.
        int up_start = 0;
        while (up_start <= J && mesh.rho_values[up_start] <= rho_b) ++up_start;
        // Ascending part.
        std::array<cplx, 3> acc{};
        std::array<cplx, 3> acc_flip{};
        cplx w = w_cursor;
        double prev = rho_b;
        for (int j = up_start; j <= J; ++j) {
            Segment seg = Segment::line(std::polar(std::exp(prev), theta0),
                                        std::polar(std::exp(mesh.rho_values[j]), theta0));
            EdgeIntegrals e = edge_integrals(seg, w);
            for (int c = 0; c < 3; ++c) {
                acc[c] += e.A[c] + e.B[c];
                acc_flip[c] += e.A[c] - e.B[c];
            }
            w = e.w_end;
            spoke_acc[j] = acc;
            spoke_acc_flip[j] = acc_flip;
            spoke_w[j] = w;
            prev = mesh.rho_values[j];
        }
        // Descending part.
        acc = {};
        acc_flip = {};
        w = w_cursor;
        prev = rho_b;
        for (int j = up_start - 1; j >= 0; --j) {
            Segment seg = Segment::line(std::polar(std::exp(prev), theta0),
                                        std::polar(std::exp(mesh.rho_values[j]), theta0));
            EdgeIntegrals e = edge_integrals(seg, w);
            for (int c = 0; c < 3; ++c) {
                acc[c] += e.A[c] + e.B[c];
                acc_flip[c] += e.A[c] - e.B[c];
            }
            w = e.w_end;
            spoke_acc[j] = acc;
            spoke_acc_flip[j] = acc_flip;
            spoke_w[j] = w;
            prev = mesh.rho_values[j];
        }
    }

    // Row sweeps.
    std::vector<std::vector<std::array<cplx, 3>>> val(
        J + 1, std::vector<std::array<cplx, 3>>(N));
    std::vector<std::vector<std::array<cplx, 3>>> val_flip(
        J + 1, std::vector<std::array<cplx, 3>>(N));
    std::vector<std::vector<cplx>> wtree(J + 1, std::vector<cplx>(N, cplx(0.0)));
    mesh.wrap_flip.assign(J + 1, 0);

    for (int j = 0; j <= J; ++j) {
        std::array<cplx, 3> acc{};
        std::array<cplx, 3> acc_flip{};
        for (int c = 0; c < 3; ++c) {
            acc[c] = base_acc[c] + spoke_acc[j][c];
            acc_flip[c] = base_flip[c] + spoke_acc_flip[j][c];
        }
        cplx w = spoke_w[j];
        val[j][0] = acc;
        val_flip[j][0] = acc_flip;
        wtree[j][0] = w;
        for (int k = 0; k + 1 < N; ++k) {
            double radius = std::exp(mesh.rho_values[j]);
            Segment seg = Segment::arc(0.0, radius, radius, mesh.theta_values[k],
                                       mesh.theta_values[k + 1]);
            EdgeIntegrals e = edge_integrals(seg, w);
            for (int c = 0; c < 3; ++c) {
                acc[c] += e.A[c] + e.B[c];
                acc_flip[c] += e.A[c] - e.B[c];
            }
            w = e.w_end;
            val[j][k + 1] = acc;
            val_flip[j][k + 1] = acc_flip;
            wtree[j][k + 1] = w;
        }
        if (curve) {
            double radius = std::exp(mesh.rho_values[j]);
            Segment seg = Segment::arc(0.0, radius, radius, mesh.theta_values[N - 1],
                                       mesh.theta_values[0] + 2.0 * M_PI);
            EdgeIntegrals e = edge_integrals(seg, w);
            mesh.wrap_flip[j] =
                (std::abs(e.w_end - wtree[j][0]) > std::abs(e.w_end + wtree[j][0])) ? 1 : 0;
        }
    }

    // Radial edge flips at every angle.
    mesh.radial_flip.assign(size_t(J) * N, 0);
    if (curve) {
        for (int j = 0; j < J; ++j)
            for (int k = 0; k < N; ++k) {
                Segment seg = Segment::line(grid_z(j, k), grid_z(j + 1, k));
                PathSpec one;
                one.segments = {seg};
                LiftOptions lo;
                lo.start_w = wtree[j][k];
                lo.init_samples = 16;
                LiftedPath lp = lift_path(dom, one, lo);
                mesh.radial_flip[size_t(j) * N + k] =
                    (std::abs(lp.end_w() - wtree[j + 1][k]) >
                     std::abs(lp.end_w() + wtree[j + 1][k]))
                        ? 1
                        : 0;
            }
    }

    // Vertices.
    FundamentalForms ff = fundamental_forms(d_);
    mesh.vertices.resize(size_t(J + 1) * N * mesh.sheets);
    for (int j = 0; j <= J; ++j)
        for (int k = 0; k < N; ++k)
            for (int s = 0; s < mesh.sheets; ++s) {
                MeshVertex v;
                v.p.z = grid_z(j, k);
                v.p.w = (s == 0) ? wtree[j][k] : -wtree[j][k];
                v.sheet = s;
                const auto& acc = (s == 0) ? val[j][k] : val_flip[j][k];
                for (int c = 0; c < 3; ++c) {
                    cplx total = acc[c];
                    if (s == 1) total += flip_offset_[c];
                    v.pos[c] = total.real();
                }
                double lo_d = std::abs(ff.phi3_over_g.eval(v.p.z, v.p.w));
                double hi_d = std::abs(ff.g_phi3.eval(v.p.z, v.p.w));
                v.conformal_factor = 0.25 * (lo_d - hi_d) * (lo_d - hi_d);
                v.abs_g = std::abs(d_.g.eval(v.p.z, v.p.w));
                mesh.vertices[mesh.index(j, k, s)] = v;
            }

    // Faces with sheet bookkeeping across flip edges.
    for (int j = 0; j < J; ++j)
        for (int k = 0; k < N; ++k) {
            int k2 = (k + 1) % N;
            int f_b = (k2 == 0) ? mesh.wrap_flip[j] : 0;
            int f_t = (k2 == 0) ? mesh.wrap_flip[j + 1] : 0;
            int f_l = curve ? mesh.radial_flip[size_t(j) * N + k] : 0;
            int f_r = curve ? mesh.radial_flip[size_t(j) * N + k2] : 0;
            if ((f_b ^ f_r ^ f_t ^ f_l) != 0) {
                ++mesh.skipped_cells;
                continue;
            }
            for (int s = 0; s < mesh.sheets; ++s) {
                int s01 = s ^ f_b;
                int s11 = s01 ^ f_r;
                int s10 = s ^ f_l;
                mesh.quads.push_back({mesh.index(j, k, s), mesh.index(j, k2, s01),
                                      mesh.index(j + 1, k2, s11), mesh.index(j + 1, k, s10)});
            }
        }

    // Antipodal pairing: (rho, theta) -> (-rho, theta + pi), matched in w;
    // the conjugate variant keeps theta fixed.
    if (d_.nonorientable()) {
        bool conj_kind = d_.involution.kind == InvolutionKind::plane_conj_antipodal;
        for (int j = 0; j <= J; ++j)
            for (int k = 0; k < N; ++k) {
                int jm = J - j;
                int km = conj_kind ? k : (k + N / 2) % N;
                if (std::abs(mesh.rho_values[j] + mesh.rho_values[jm]) > 1e-9)
                    throw std::logic_error("row nudges broke the radial symmetry");
                for (int s = 0; s < mesh.sheets; ++s) {
                    int s2 = 0;
                    if (curve) {
                        cplx w_img = -1.0 / std::conj(mesh.vertices[mesh.index(j, k, s)].p.w);
                        cplx w0 = mesh.vertices[mesh.index(jm, km, 0)].p.w;
                        s2 = (std::abs(w_img - w0) <= std::abs(w_img + w0)) ? 0 : 1;
                    }
                    mesh.involution_pairs.emplace_back(mesh.index(j, k, s),
                                                       mesh.index(jm, km, s2));
                }
            }
    }

    if (opt.with_singular) {
        SingularLocusOptions so;
        so.n_rho = opt.singular_grid;
        so.n_theta = opt.singular_grid;
        so.rho_min = opt.rho_min;
        so.rho_max = opt.rho_max;
        for (const auto& curve_piece : singular_locus(d_, so)) {
            std::vector<Vec3> pl;
            for (const auto& p : curve_piece.points) pl.push_back(evaluate(p));
            mesh.singular_polylines.push_back(std::move(pl));
        }
    }
    return mesh;
}

struct HarmonicityReport {
    double worst_ratio = 0.0;  // residual over bound, max across nodes
    int nodes = 0;
    bool ok = false;
};

// Five-point stencil residual in the conformal log-polar coordinate. For real
// parts of holomorphic integrals the anisotropic Laplacian vanishes to O(h^2),
// so the scaled residual must stay under the bound. Nodes within a few cells
// of a finite branch point are skipped: the stencil cannot resolve the
// sqrt-type derivative growth there at any fixed grid step.
inline HarmonicityReport harmonicity_check(const SurfaceMesh& mesh,
                                           const std::vector<cplx>& branch_avoid = {},
                                           double bound_factor = 1e-4) {
    HarmonicityReport rep;
    int J = mesh.n_rho, N = mesh.n_theta;
    const double avoid_cells = 12.0;
    for (int j = 1; j < J; ++j) {
        double dr_up = mesh.rho_values[j + 1] - mesh.rho_values[j];
        double dr_dn = mesh.rho_values[j] - mesh.rho_values[j - 1];
        // Uneven rows (nudged off branch radii) would bias the stencil.
        if (std::abs(dr_up - dr_dn) > 1e-9 * (dr_up + dr_dn)) continue;
        double dr = dr_up;
        double dt = mesh.theta_values[1] - mesh.theta_values[0];
        for (int k = 0; k < N; ++k) {
            int kl = (k + N - 1) % N, kr = (k + 1) % N;
            bool near_branch = false;
            for (cplx b : branch_avoid) {
                if (std::abs(b) < 1e-12) continue;
                double drho = (mesh.rho_values[j] - std::log(std::abs(b))) / dr;
                double dth = std::remainder(mesh.theta_values[k] - std::arg(b), 2.0 * M_PI) / dt;
                if (std::hypot(drho, dth) < avoid_cells) near_branch = true;
            }
            if (near_branch) continue;
            for (int s = 0; s < mesh.sheets; ++s) {
                // Seam-crossing stencils need the flip bits; skip them, the
                // interior supplies plenty of nodes.
                if (mesh.sheets == 2) {
                    if (kl == N - 1 || kr == 0) continue;
                    if (mesh.radial_flip[size_t(j) * N + k] ||
                        mesh.radial_flip[size_t(j - 1) * N + k])
                        continue;
                }
                const Vec3& C = mesh.vertices[mesh.index(j, k, s)].pos;
                const Vec3& E = mesh.vertices[mesh.index(j + 1, k, s)].pos;
                const Vec3& W = mesh.vertices[mesh.index(j - 1, k, s)].pos;
                const Vec3& Np = mesh.vertices[mesh.index(j, kr, s)].pos;
                const Vec3& Sp = mesh.vertices[mesh.index(j, kl, s)].pos;
                double resid = 0.0, scale = 1.0;
                for (int c = 0; c < 3; ++c) {
                    double lap = (E[c] - 2.0 * C[c] + W[c]) / (dr * dr) +
                                 (Np[c] - 2.0 * C[c] + Sp[c]) / (dt * dt);
                    resid += lap * lap;
                }
                resid = std::sqrt(resid) * dr * dt;
                for (const Vec3* v : {&C, &E, &W, &Np, &Sp})
                    scale = std::max(scale, vec3_norm(*v));
                // The stencil sits at radius |z| in the plane it differences
                // over, so its scale spans the coordinate footprint too. Near
                // the outer truncation radius derivative growth keeps the
                // residual above the unit floor even where the image happens
                // to pass near the origin.
                scale = std::max(scale, std::exp(mesh.rho_values[j]));
                double ratio = resid / (bound_factor * scale * scale);
                rep.worst_ratio = std::max(rep.worst_ratio, ratio);
                ++rep.nodes;
            }
        }
    }
    rep.ok = rep.nodes > 0 && rep.worst_ratio <= 1.0;
    return rep;
}

}  // namespace maxface
