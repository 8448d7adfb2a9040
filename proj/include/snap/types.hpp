#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace snap {

using Index = Eigen::Index;
using IndexSet = std::vector<Index>;

template <class Scalar>
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

// Column-major: columns are the unit of work in every kernel.
template <class Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor>;

enum class ErrorKind {
    DimensionMismatch,
    ZeroVarianceColumn,
    InvalidArgument,
    OutOfMemory,
    SingularSystem,
    CgBreakdown,
    ActiveSetTooLarge,
    DegenerateResponse,
    NoiseTooLarge,
    ZeroResidual,
    ZeroTruth,
    ParseError,
};

inline const char* to_string(ErrorKind kind)
{
    switch (kind) {
        case ErrorKind::DimensionMismatch: return "DimensionMismatch";
        case ErrorKind::ZeroVarianceColumn: return "ZeroVarianceColumn";
        case ErrorKind::InvalidArgument: return "InvalidArgument";
        case ErrorKind::OutOfMemory: return "OutOfMemory";
        case ErrorKind::SingularSystem: return "SingularSystem";
        case ErrorKind::CgBreakdown: return "CgBreakdown";
        case ErrorKind::ActiveSetTooLarge: return "ActiveSetTooLarge";
        case ErrorKind::DegenerateResponse: return "DegenerateResponse";
        case ErrorKind::NoiseTooLarge: return "NoiseTooLarge";
        case ErrorKind::ZeroResidual: return "ZeroResidual";
        case ErrorKind::ZeroTruth: return "ZeroTruth";
        case ErrorKind::ParseError: return "ParseError";
    }
    return "Unknown";
}

/**
 * Library error. `index()` carries the offending column, knot, or row
 * when the error is tied to one.
 */
class Error : public std::runtime_error
{
public:
    Error(ErrorKind kind, const std::string& what, std::optional<Index> index = std::nullopt)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what),
          kind_(kind),
          index_(index)
    {}

    ErrorKind kind() const noexcept { return kind_; }
    std::optional<Index> index() const noexcept { return index_; }

private:
    ErrorKind kind_;
    std::optional<Index> index_;
};

/**
 * Numerical failure inside a solve. Keeps the iterate reached before the
 * failure so callers can report diagnostics; `knot()` is set by the path
 * driver.
 */
class SolveError : public Error
{
public:
    SolveError(ErrorKind kind, const std::string& what,
               Eigen::VectorXd beta, Eigen::VectorXd dual,
               std::optional<Index> knot = std::nullopt)
        : Error(kind, what, knot), beta_(std::move(beta)), dual_(std::move(dual)), knot_(knot)
    {}

    const Eigen::VectorXd& partial_beta() const noexcept { return beta_; }
    const Eigen::VectorXd& partial_dual() const noexcept { return dual_; }
    std::optional<Index> knot() const noexcept { return knot_; }

    SolveError at_knot(Index knot) const
    {
        return SolveError(kind(), std::string(what()) + " (knot " + std::to_string(knot) + ")",
                          beta_, dual_, knot);
    }

private:
    Eigen::VectorXd beta_;
    Eigen::VectorXd dual_;
    std::optional<Index> knot_;
};

/// Primal coefficients and dual correlations, z = (beta, dual).
template <class Scalar>
struct PrimalDualState
{
    Vec<Scalar> beta;
    Vec<Scalar> dual;

    Index size() const { return beta.size(); }
};

/// Complementary sorted index sets of a partition of {0, ..., p-1}.
struct ActivePartition
{
    IndexSet active;
    IndexSet inactive;

    bool operator==(const ActivePartition&) const = default;
};

/// Sparse (index, value) storage for path coefficients.
template <class Scalar>
struct SparseCoefficients
{
    Index dim = 0;
    IndexSet index;
    std::vector<Scalar> value;

    Index nnz() const { return static_cast<Index>(index.size()); }

    static SparseCoefficients from_dense(const Vec<Scalar>& v, Scalar threshold = Scalar(0))
    {
        SparseCoefficients out;
        out.dim = v.size();
        for (Index j = 0; j < v.size(); ++j) {
            if (std::abs(v(j)) > threshold) {
                out.index.push_back(j);
                out.value.push_back(v(j));
            }
        }
        return out;
    }

    Vec<Scalar> to_dense() const
    {
        Vec<Scalar> v = Vec<Scalar>::Zero(dim);
        for (std::size_t k = 0; k < index.size(); ++k) v(index[k]) = value[k];
        return v;
    }
};

/// Ground truth of a simulated instance.
struct TruthModel
{
    Eigen::VectorXd beta_true;
    IndexSet support;
    double sigma = 0.0;

    Index sparsity() const { return static_cast<Index>(support.size()); }

    /// max |beta_A| / min |beta_A|; 1 for an empty support.
    double range() const
    {
        if (support.empty()) return 1.0;
        double lo = std::abs(beta_true(support.front()));
        double hi = lo;
        for (Index j : support) {
            lo = std::min(lo, std::abs(beta_true(j)));
            hi = std::max(hi, std::abs(beta_true(j)));
        }
        return hi / lo;
    }

    double beta_min() const
    {
        double lo = INFINITY;
        for (Index j : support) lo = std::min(lo, std::abs(beta_true(j)));
        return lo;
    }

    static TruthModel from_beta(Eigen::VectorXd beta, double sigma)
    {
        TruthModel t;
        for (Index j = 0; j < beta.size(); ++j) {
            if (beta(j) != 0.0) t.support.push_back(j);
        }
        t.beta_true = std::move(beta);
        t.sigma = sigma;
        return t;
    }
};

template <class Scalar>
inline Scalar sign(Scalar x)
{
    return Scalar((x > Scalar(0)) - (x < Scalar(0)));
}

}  // namespace snap
