#pragma once

#include <snap/path.hpp>

#include <ostream>

namespace snap {

enum class Criterion { MBIC, HBIC };

inline const char* to_string(Criterion c) { return c == Criterion::MBIC ? "MBIC" : "HBIC"; }

template <class Scalar>
struct SelectorResult
{
    Index chosen_knot = 0;
    Scalar chosen_lambda = 0;
    std::vector<Scalar> criterion_values;
    Criterion criterion = Criterion::MBIC;

    Scalar chosen_value() const { return criterion_values[static_cast<std::size_t>(chosen_knot)]; }
};

namespace detail {

template <class Scalar>
Scalar knot_rss(const ProblemData<Scalar>& prob, const PathKnot<Scalar>& knot)
{
    Vec<Scalar> fit = Vec<Scalar>::Zero(prob.n());
    for (std::size_t k = 0; k < knot.beta.index.size(); ++k) {
        fit.noalias() += knot.beta.value[k] * prob.X().col(knot.beta.index[k]);
    }
    return (fit - prob.y()).squaredNorm();
}

template <class Scalar>
Index knot_support(const PathKnot<Scalar>& knot, Scalar threshold)
{
    Index s = 0;
    for (Scalar v : knot.beta.value) s += std::abs(v) > threshold;
    return s;
}

// argmin; strict '<' keeps the earliest (largest lambda) knot on ties
template <class Scalar>
SelectorResult<Scalar> pick(const PathResult<Scalar>& path, std::vector<Scalar> values, Criterion c)
{
    SelectorResult<Scalar> res;
    res.criterion = c;
    for (std::size_t t = 1; t < values.size(); ++t) {
        if (values[t] < values[static_cast<std::size_t>(res.chosen_knot)]) res.chosen_knot = static_cast<Index>(t);
    }
    res.chosen_lambda = path.knots[static_cast<std::size_t>(res.chosen_knot)].lambda;
    res.criterion_values = std::move(values);
    return res;
}

}  // namespace detail

/// (1/2n) RSS + |A| log(n) log(p) / n, minimized over the path.
template <class Scalar>
SelectorResult<Scalar> mbic_select(const ProblemData<Scalar>& prob, const PathResult<Scalar>& path)
{
    if (path.knots.empty()) throw Error(ErrorKind::InvalidArgument, "path is empty");
    const Scalar n = Scalar(prob.n());
    const Scalar unit = std::log(n) * std::log(Scalar(prob.p())) / n;
    std::vector<Scalar> values;
    values.reserve(path.knots.size());
    for (const auto& k : path.knots) {
        values.push_back(detail::knot_rss(prob, k) / (2 * n) +
                         Scalar(detail::knot_support(k, path.support_threshold)) * unit);
    }
    return detail::pick(path, std::move(values), Criterion::MBIC);
}

/// log(RSS/n) + |A| log(log n) log(p) / n, minimized over the path.
template <class Scalar>
SelectorResult<Scalar> hbic_select(const ProblemData<Scalar>& prob, const PathResult<Scalar>& path)
{
    if (path.knots.empty()) throw Error(ErrorKind::InvalidArgument, "path is empty");
    const Scalar n = Scalar(prob.n());
    const Scalar unit = std::log(std::log(n)) * std::log(Scalar(prob.p())) / n;
    std::vector<Scalar> values;
    values.reserve(path.knots.size());
    for (std::size_t t = 0; t < path.knots.size(); ++t) {
        const Scalar rss = detail::knot_rss(prob, path.knots[t]);
        if (!(rss > Scalar(0))) {
            throw Error(ErrorKind::ZeroResidual, "knot " + std::to_string(t) + " interpolates the response",
                        static_cast<Index>(t));
        }
        values.push_back(std::log(rss / n) +
                         Scalar(detail::knot_support(path.knots[t], path.support_threshold)) * unit);
    }
    return detail::pick(path, std::move(values), Criterion::HBIC);
}

template <class Scalar>
SelectorResult<Scalar> select(const ProblemData<Scalar>& prob, const PathResult<Scalar>& path, Criterion c)
{
    return c == Criterion::MBIC ? mbic_select(prob, path) : hbic_select(prob, path);
}

/// Selector report row appended after the path CSV.
template <class Scalar>
void write_selector_row(std::ostream& os, const SelectorResult<Scalar>& sel)
{
    os.precision(17);
    os << "#selector,criterion,chosen_knot,chosen_lambda,value\n";
    os << "#selector," << to_string(sel.criterion) << ',' << sel.chosen_knot << ',' << sel.chosen_lambda << ','
       << sel.chosen_value() << '\n';
}

}  // namespace snap
