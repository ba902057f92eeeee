#pragma once

// Nonexpansive mappings on R^d under a chosen norm, as immutable descriptors.
// Projections are only offered under the Euclidean norm (that is the norm in
// which they are provably nonexpansive); rotations and affine maps may be
// declared under any norm and get vetted empirically by check_nonexpansive.

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "halrates/report.hpp"

namespace halrates {

using Vec = std::vector<double>;

enum class Norm { euclidean, max, sum };

const char* to_string(Norm n);

double norm_of(std::span<const double> v, Norm norm);
double dist_of(std::span<const double> a, std::span<const double> b, Norm norm);

struct RotationPlane {
    std::size_t i = 0; // 0-based coordinate indices, i != j
    std::size_t j = 1;
    double angle = 0.0; // radians
};

class NonexpansiveOp {
public:
    static NonexpansiveOp identity(std::size_t dim, Norm norm = Norm::euclidean);
    // Euclidean projection onto the closed ball B(center, radius).
    static NonexpansiveOp ball_projection(Vec center, double radius);
    // Componentwise clamp onto the box [lo, hi].
    static NonexpansiveOp box_projection(Vec lo, Vec hi);
    // Euclidean projection onto { x : <a, x> <= b }, a != 0.
    static NonexpansiveOp halfspace_projection(Vec a, double b);
    // Product of plane (Givens) rotations, applied in the given order.
    static NonexpansiveOp rotation(std::size_t dim, std::vector<RotationPlane> planes,
                                   Norm norm = Norm::euclidean);
    // x -> A x + b with A in row-major order; nonexpansiveness (||A|| <= 1 in
    // the declared norm) is the caller's claim, testable via check_nonexpansive.
    static NonexpansiveOp averaged_affine(std::size_t dim, std::vector<double> a_rowmajor, Vec b,
                                          Norm norm = Norm::euclidean);
    // Apply stages.front() first, then onward: composition({S, T}) is T after S.
    static NonexpansiveOp composition(std::vector<NonexpansiveOp> stages);

    // Declare that the op maps the ball B(0, radius) (in its own norm) into
    // itself. This is what entitles bound computations to the certified
    // norm constant max(1, ceil(3 * radius)).
    NonexpansiveOp with_invariant_radius(double radius) const;

    std::size_t dim() const { return dim_; }
    Norm norm() const { return norm_; }
    std::optional<double> invariant_radius() const { return radius_; }
    bool linear() const;
    const std::string& id() const { return id_; }

    // T(x). Throws ShapeError on a dimension mismatch.
    Vec apply(std::span<const double> x) const;
    // Allocation-free variant for hot loops; out.size() must equal dim().
    void apply_into(std::span<const double> x, std::span<double> out) const;

    struct Impl; // implementation hierarchy lives in operators.cpp

private:
    NonexpansiveOp(std::shared_ptr<const Impl> impl, std::size_t dim, Norm norm, std::string id);

    std::shared_ptr<const Impl> impl_;
    std::size_t dim_ = 0;
    Norm norm_ = Norm::euclidean;
    std::optional<double> radius_;
    std::string id_;
};

// Sampled validation: draw `trials` pairs from the ball B(0, R) in the op's
// norm (R = declared invariant radius, else 1) and check
//   d(Tx, Ty) <= d(x, y) + tol * (1 + d(x, y)),
// plus, when an invariant radius is declared, ||Tx|| <= R + tol * (1 + R).
// Deterministic for a fixed seed, independent of thread count.
VerificationReport check_nonexpansive(const NonexpansiveOp& op, std::uint64_t trials,
                                      std::uint64_t seed, double tol = 1e-12);

} // namespace halrates
