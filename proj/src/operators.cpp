#include "halrates/operators.hpp"

#include <cmath>
#include <omp.h>
#include <sstream>

#include "halrates/errors.hpp"
#include "halrates/rng.hpp"

namespace halrates {

const char* to_string(Norm n) {
    switch (n) {
        case Norm::euclidean: return "euclidean";
        case Norm::max: return "max";
        case Norm::sum: return "sum";
    }
    return "?";
}

double norm_of(std::span<const double> v, Norm norm) {
    switch (norm) {
        case Norm::euclidean: {
            double s = 0.0;
            for (double x : v) s += x * x;
            return std::sqrt(s);
        }
        case Norm::max: {
            double m = 0.0;
            for (double x : v) m = std::max(m, std::abs(x));
            return m;
        }
        case Norm::sum: {
            double s = 0.0;
            for (double x : v) s += std::abs(x);
            return s;
        }
    }
    return 0.0;
}

double dist_of(std::span<const double> a, std::span<const double> b, Norm norm) {
    if (a.size() != b.size()) throw ShapeError("dist_of: mismatched dimensions");
    switch (norm) {
        case Norm::euclidean: {
            double s = 0.0;
            for (std::size_t i = 0; i < a.size(); ++i) {
                double d = a[i] - b[i];
                s += d * d;
            }
            return std::sqrt(s);
        }
        case Norm::max: {
            double m = 0.0;
            for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
            return m;
        }
        case Norm::sum: {
            double s = 0.0;
            for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
            return s;
        }
    }
    return 0.0;
}

// ---- op implementations ----------------------------------------------------

struct NonexpansiveOp::Impl {
    virtual ~Impl() = default;
    virtual void apply(std::span<const double> x, std::span<double> out) const = 0;
    virtual bool linear() const { return false; }
};

namespace {

struct IdentityImpl final : NonexpansiveOp::Impl {
    void apply(std::span<const double> x, std::span<double> out) const override {
        std::copy(x.begin(), x.end(), out.begin());
    }
    bool linear() const override { return true; }
};

struct BallProjImpl final : NonexpansiveOp::Impl {
    Vec center;
    double radius;
    void apply(std::span<const double> x, std::span<double> out) const override {
        double d2 = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            double d = x[i] - center[i];
            d2 += d * d;
        }
        double d = std::sqrt(d2);
        if (d <= radius) {
            std::copy(x.begin(), x.end(), out.begin());
            return;
        }
        double scale = radius / d;
        for (std::size_t i = 0; i < x.size(); ++i)
            out[i] = center[i] + (x[i] - center[i]) * scale;
    }
};

struct BoxProjImpl final : NonexpansiveOp::Impl {
    Vec lo, hi;
    void apply(std::span<const double> x, std::span<double> out) const override {
        for (std::size_t i = 0; i < x.size(); ++i)
            out[i] = std::min(hi[i], std::max(lo[i], x[i]));
    }
};

struct HalfspaceProjImpl final : NonexpansiveOp::Impl {
    Vec a;
    double b;
    double a_norm2;
    void apply(std::span<const double> x, std::span<double> out) const override {
        double dot = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) dot += a[i] * x[i];
        double excess = dot - b;
        if (excess <= 0.0) {
            std::copy(x.begin(), x.end(), out.begin());
            return;
        }
        double scale = excess / a_norm2;
        for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] - scale * a[i];
    }
};

struct RotationImpl final : NonexpansiveOp::Impl {
    struct Plane {
        std::size_t i, j;
        double c, s;
    };
    std::vector<Plane> planes;
    void apply(std::span<const double> x, std::span<double> out) const override {
        std::copy(x.begin(), x.end(), out.begin());
        for (const auto& p : planes) {
            double xi = out[p.i], xj = out[p.j];
            out[p.i] = p.c * xi - p.s * xj;
            out[p.j] = p.s * xi + p.c * xj;
        }
    }
    bool linear() const override { return true; }
};

struct AffineImpl final : NonexpansiveOp::Impl {
    std::size_t dim;
    std::vector<double> a; // row-major
    Vec b;
    bool homogeneous = true;
    void apply(std::span<const double> x, std::span<double> out) const override {
        for (std::size_t r = 0; r < dim; ++r) {
            double s = b[r];
            const double* row = a.data() + r * dim;
            for (std::size_t c = 0; c < dim; ++c) s += row[c] * x[c];
            out[r] = s;
        }
    }
    bool linear() const override { return homogeneous; }
};

struct CompositionImpl final : NonexpansiveOp::Impl {
    std::vector<NonexpansiveOp> stages;
    void apply(std::span<const double> x, std::span<double> out) const override {
        // Ping-pong between out and a local buffer; stages applied in order.
        std::vector<double> tmp(x.size());
        std::copy(x.begin(), x.end(), out.begin());
        for (const auto& st : stages) {
            std::copy(out.begin(), out.end(), tmp.begin());
            st.apply_into(tmp, out);
        }
    }
    bool linear() const override {
        for (const auto& st : stages)
            if (!st.linear()) return false;
        return true;
    }
};

std::string vec_str(const Vec& v) {
    std::ostringstream os;
    os.precision(6);
    os << "(";
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
    os << ")";
    return os.str();
}

} // namespace

NonexpansiveOp::NonexpansiveOp(std::shared_ptr<const Impl> impl, std::size_t dim, Norm norm,
                               std::string id)
    : impl_(std::move(impl)), dim_(dim), norm_(norm), id_(std::move(id)) {
    if (dim_ == 0) throw ShapeError("operator dimension must be >= 1");
}

NonexpansiveOp NonexpansiveOp::identity(std::size_t dim, Norm norm) {
    return NonexpansiveOp(std::make_shared<IdentityImpl>(), dim, norm, "identity");
}

NonexpansiveOp NonexpansiveOp::ball_projection(Vec center, double radius) {
    if (!(radius >= 0.0) || !std::isfinite(radius))
        throw DomainError("ball_projection: radius must be finite and >= 0");
    auto impl = std::make_shared<BallProjImpl>();
    std::size_t dim = center.size();
    std::string id = "ball_proj(c=" + vec_str(center) + ",r=" + std::to_string(radius) + ")";
    impl->center = std::move(center);
    impl->radius = radius;
    return NonexpansiveOp(std::move(impl), dim, Norm::euclidean, std::move(id));
}

NonexpansiveOp NonexpansiveOp::box_projection(Vec lo, Vec hi) {
    if (lo.size() != hi.size()) throw ShapeError("box_projection: lo/hi dimension mismatch");
    for (std::size_t i = 0; i < lo.size(); ++i)
        if (!(lo[i] <= hi[i]))
            throw DomainError("box_projection: lo must be <= hi componentwise");
    auto impl = std::make_shared<BoxProjImpl>();
    std::size_t dim = lo.size();
    impl->lo = std::move(lo);
    impl->hi = std::move(hi);
    return NonexpansiveOp(std::move(impl), dim, Norm::euclidean, "box_proj");
}

NonexpansiveOp NonexpansiveOp::halfspace_projection(Vec a, double b) {
    double n2 = 0.0;
    for (double v : a) n2 += v * v;
    if (!(n2 > 0.0) || !std::isfinite(n2))
        throw DomainError("halfspace_projection: normal vector must be nonzero and finite");
    auto impl = std::make_shared<HalfspaceProjImpl>();
    std::size_t dim = a.size();
    impl->a = std::move(a);
    impl->b = b;
    impl->a_norm2 = n2;
    return NonexpansiveOp(std::move(impl), dim, Norm::euclidean, "halfspace_proj");
}

NonexpansiveOp NonexpansiveOp::rotation(std::size_t dim, std::vector<RotationPlane> planes,
                                        Norm norm) {
    auto impl = std::make_shared<RotationImpl>();
    impl->planes.reserve(planes.size());
    for (const auto& p : planes) {
        if (p.i >= dim || p.j >= dim || p.i == p.j)
            throw ShapeError("rotation: plane indices must be distinct and < dim");
        impl->planes.push_back({p.i, p.j, std::cos(p.angle), std::sin(p.angle)});
    }
    return NonexpansiveOp(std::move(impl), dim, norm,
                          "rotation(" + std::to_string(planes.size()) + " planes)");
}

NonexpansiveOp NonexpansiveOp::averaged_affine(std::size_t dim, std::vector<double> a_rowmajor,
                                               Vec b, Norm norm) {
    if (a_rowmajor.size() != dim * dim)
        throw ShapeError("averaged_affine: matrix must be dim x dim row-major");
    if (b.size() != dim) throw ShapeError("averaged_affine: offset dimension mismatch");
    auto impl = std::make_shared<AffineImpl>();
    impl->dim = dim;
    impl->a = std::move(a_rowmajor);
    impl->b = std::move(b);
    for (double v : impl->b)
        if (v != 0.0) impl->homogeneous = false;
    return NonexpansiveOp(std::move(impl), dim, norm,
                          impl->homogeneous ? "linear_affine" : "affine");
}

NonexpansiveOp NonexpansiveOp::composition(std::vector<NonexpansiveOp> stages) {
    if (stages.empty()) throw ShapeError("composition: need at least one stage");
    std::size_t dim = stages.front().dim();
    Norm norm = stages.front().norm();
    std::string id = "comp[";
    for (std::size_t i = 0; i < stages.size(); ++i) {
        if (stages[i].dim() != dim)
            throw ShapeError("composition: all stages must share one dimension");
        if (stages[i].norm() != norm)
            throw PreconditionError("composition: all stages must share one norm");
        id += (i ? ";" : "") + stages[i].id();
    }
    id += "]";
    auto impl = std::make_shared<CompositionImpl>();
    impl->stages = std::move(stages);
    return NonexpansiveOp(std::move(impl), dim, norm, std::move(id));
}

NonexpansiveOp NonexpansiveOp::with_invariant_radius(double radius) const {
    if (!(radius > 0.0) || !std::isfinite(radius))
        throw DomainError("invariant radius must be finite and > 0");
    NonexpansiveOp copy = *this;
    copy.radius_ = radius;
    return copy;
}

bool NonexpansiveOp::linear() const { return impl_->linear(); }

Vec NonexpansiveOp::apply(std::span<const double> x) const {
    Vec out(dim_);
    apply_into(x, out);
    return out;
}

void NonexpansiveOp::apply_into(std::span<const double> x, std::span<double> out) const {
    if (x.size() != dim_ || out.size() != dim_)
        throw ShapeError("operator '" + id_ + "' expects dimension " + std::to_string(dim_) +
                         ", got " + std::to_string(x.size()));
    impl_->apply(x, out);
}

// ---- sampled validation ----------------------------------------------------

namespace {

void sample_in_ball(SmallRng& rng, Norm norm, double radius, std::span<double> out) {
    const std::size_t d = out.size();
    switch (norm) {
        case Norm::max:
            for (auto& v : out) v = (2.0 * rng.next_unit() - 1.0) * radius;
            return;
        case Norm::euclidean: {
            double n2 = 0.0;
            for (auto& v : out) {
                v = rng.next_gaussian();
                n2 += v * v;
            }
            double n = std::sqrt(n2);
            if (n == 0.0) n = 1.0;
            double r = radius * std::pow(rng.next_unit_pos(), 1.0 / static_cast<double>(d));
            for (auto& v : out) v *= r / n;
            return;
        }
        case Norm::sum: {
            double tot = 0.0;
            for (auto& v : out) {
                v = -std::log(rng.next_unit_pos());
                tot += v;
            }
            double r = radius * std::pow(rng.next_unit_pos(), 1.0 / static_cast<double>(d));
            for (auto& v : out) {
                double sign = rng.next_u64() & 1 ? 1.0 : -1.0;
                v = sign * v / tot * r;
            }
            return;
        }
    }
}

} // namespace

VerificationReport check_nonexpansive(const NonexpansiveOp& op, std::uint64_t trials,
                                      std::uint64_t seed, double tol) {
    if (trials < 1) throw DomainError("check_nonexpansive: need at least one trial");
    const double radius = op.invariant_radius().value_or(1.0);
    const std::size_t d = op.dim();

    // Each trial records its worst violations; the reduction over the arrays
    // is a serial scan, so thread count cannot change the outcome.
    std::vector<double> expand_violation(trials, 0.0); // d(Tx,Ty) - allowed
    std::vector<double> escape_violation(trials, 0.0); // ||Tx|| - allowed

#pragma omp parallel
    {
        Vec x(d), y(d), tx(d), ty(d);
#pragma omp for schedule(static)
        for (std::int64_t t = 0; t < static_cast<std::int64_t>(trials); ++t) {
            SmallRng rng = SmallRng::for_stream(seed, static_cast<std::uint64_t>(t));
            sample_in_ball(rng, op.norm(), radius, x);
            sample_in_ball(rng, op.norm(), radius, y);
            op.apply_into(x, tx);
            op.apply_into(y, ty);
            double dxy = dist_of(x, y, op.norm());
            double dtxy = dist_of(tx, ty, op.norm());
            expand_violation[static_cast<std::size_t>(t)] =
                dtxy - (dxy + tol * (1.0 + dxy));
            double keep = std::max(norm_of(tx, op.norm()), norm_of(ty, op.norm()));
            escape_violation[static_cast<std::size_t>(t)] = keep - (radius + tol * (1.0 + radius));
        }
    }

    VerificationReport report;
    auto worst = [](const std::vector<double>& v) {
        std::size_t arg = 0;
        for (std::size_t i = 1; i < v.size(); ++i)
            if (v[i] > v[arg]) arg = i;
        return std::pair<double, std::size_t>(v[arg], arg);
    };
    auto [we, wi] = worst(expand_violation);
    if (we > 0.0)
        report.add("nonexpansive", CheckStatus::fail,
                   "distance expanded by " + std::to_string(we) + " at trial " +
                       std::to_string(wi));
    else
        report.add("nonexpansive", CheckStatus::pass,
                   std::to_string(trials) + " sampled pairs, worst slack " + std::to_string(-we));
    if (op.invariant_radius()) {
        auto [ve, vi] = worst(escape_violation);
        if (ve > 0.0)
            report.add("invariant_ball", CheckStatus::fail,
                       "image escapes declared ball by " + std::to_string(ve) + " at trial " +
                           std::to_string(vi));
        else
            report.add("invariant_ball", CheckStatus::pass,
                       "images stay inside the declared ball");
    } else {
        report.add("invariant_ball", CheckStatus::skipped, "no invariant radius declared");
    }
    return report;
}

} // namespace halrates
