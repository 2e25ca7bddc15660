#include "axw/interp.hpp"

#include "axw/error.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>

namespace axw {

CarrierPoint CarrierPoint::barycenter(const SimplicialComplex& complex, SimplexId s)
{
    auto n = complex.vertices_of(s).size();
    return {s, std::vector<double>(n, 1.0 / static_cast<double>(n))};
}

void validate_point(const SimplicialComplex& complex, const CarrierPoint& point)
{
    if (point.simplex < 0 || static_cast<std::size_t>(point.simplex) >= complex.size())
        throw DomainError("carrier point refers to a missing simplex");
    if (point.weights.size() != complex.vertices_of(point.simplex).size())
        throw DomainError("barycentric weight count does not match the simplex");
    double sum = 0.0;
    for (double w : point.weights) {
        if (!(w >= 0.0))
            throw DomainError("negative barycentric weight");
        sum += w;
    }
    if (std::abs(sum - 1.0) > kBarycentricTolerance)
        throw DomainError("barycentric weights do not sum to one");
}

std::vector<double> mu(const MeshWithFunction& mesh, SimplexId s)
{
    const auto& phi = mesh.function();
    auto vs = mesh.complex().vertices_of(s);
    std::vector<double> out(phi[vs[0]].begin(), phi[vs[0]].end());
    for (auto v : vs.subspan(1))
        for (std::size_t j = 0; j < out.size(); ++j)
            out[j] = std::max(out[j], phi.at(v, j));
    return out;
}

AxiswiseInterpolant::AxiswiseInterpolant(MeshWithFunction mesh)
    : mesh_(std::move(mesh)), k_(mesh_.components())
{
    const auto& K = mesh_.complex();
    const auto& phi = mesh_.function();
    if (K.dimension() > kMaxDimension)
        throw DomainError("complex dimension exceeds the interpolant's limit");
    if (k_ > 32)
        throw DomainError("axis-wise interpolation supports at most 32 components");
    const std::size_t n = K.size();

    mu_.assign(n * k_, 0.0);
    tau_.assign(n, 0);
    w_offset_.assign(n + 1, 0);
    for (SimplexId s = 0; s < static_cast<SimplexId>(n); ++s)
        w_offset_[static_cast<std::size_t>(s) + 1] =
            w_offset_[static_cast<std::size_t>(s)] + K.vertices_of(s).size();
    w_.assign(w_offset_.back(), 0.0);

    std::vector<VertexId> face;
    for (SimplexId s = 0; s < static_cast<SimplexId>(n); ++s) {
        auto us = static_cast<std::size_t>(s);
        auto vs = K.vertices_of(s);
        const auto m = static_cast<unsigned>(vs.size());
        double* mu_s = mu_.data() + us * k_;
        for (std::size_t j = 0; j < k_; ++j) {
            mu_s[j] = phi.at(vs[0], j);
            for (auto v : vs.subspan(1))
                mu_s[j] = std::max(mu_s[j], phi.at(v, j));
        }
        double* w_s = w_.data() + w_offset_[us];
        if (m == 1) {
            tau_[us] = s;
            w_s[0] = 1.0;
            continue;
        }

        // A face attains mu exactly when every component's maximum is hit
        // by one of its vertices. Enumerate faces by size, then in
        // lexicographic order of vertex positions (= vertex ids).
        std::uint32_t hit_mask[32] = {};
        for (unsigned i = 0; i < m; ++i)
            for (std::size_t j = 0; j < k_; ++j)
                if (phi.at(vs[i], j) == mu_s[j])
                    hit_mask[i] |= 1u << j;
        const std::uint32_t all = k_ == 32 ? ~0u : ((1u << k_) - 1);

        std::uint32_t chosen = 0;
        for (unsigned size = 1; size <= m && chosen == 0; ++size) {
            // positions of the current combination, lexicographic
            std::array<unsigned, 32> pos{};
            for (unsigned i = 0; i < size; ++i)
                pos[i] = i;
            while (true) {
                std::uint32_t cover = 0, subset = 0;
                for (unsigned i = 0; i < size; ++i) {
                    cover |= hit_mask[pos[i]];
                    subset |= 1u << pos[i];
                }
                if (cover == all) {
                    chosen = subset;
                    break;
                }
                int i = static_cast<int>(size) - 1;
                while (i >= 0 && pos[static_cast<unsigned>(i)] == m - size + static_cast<unsigned>(i))
                    --i;
                if (i < 0)
                    break;
                ++pos[static_cast<unsigned>(i)];
                for (unsigned t = static_cast<unsigned>(i) + 1; t < size; ++t)
                    pos[t] = pos[t - 1] + 1;
            }
        }

        if (std::popcount(chosen) == static_cast<int>(m)) {
            tau_[us] = s;
            std::fill(w_s, w_s + m, 1.0 / static_cast<double>(m));
            continue;
        }
        face.clear();
        for (unsigned i = 0; i < m; ++i)
            if (chosen & (1u << i))
                face.push_back(vs[i]);
        SimplexId tau = *K.find(face);
        tau_[us] = tau;
        const double* w_tau = w_.data() + w_offset_[static_cast<std::size_t>(tau)];
        for (unsigned i = 0, t = 0; i < m; ++i)
            w_s[i] = (chosen & (1u << i)) ? w_tau[t++] : 0.0;
    }
}

SimplexInterpData AxiswiseInterpolant::data(SimplexId s) const
{
    auto us = static_cast<std::size_t>(s);
    return {std::span<const double>(mu_.data() + us * k_, k_),
            std::span<const double>(w_.data() + w_offset_[us], w_offset_[us + 1] - w_offset_[us]),
            tau_[us]};
}

std::vector<double> AxiswiseInterpolant::evaluate(const CarrierPoint& point) const
{
    validate_point(mesh_.complex(), point);
    std::vector<double> out(k_);
    evaluate(point.simplex, point.weights, out);
    return out;
}

void AxiswiseInterpolant::evaluate(SimplexId s, std::span<const double> weights, std::span<double> out) const
{
    std::array<double, kMaxDimension + 1> buf;
    std::copy(weights.begin(), weights.end(), buf.begin());
    evaluate_reduced(s, buf.data(), out.data());
}

void AxiswiseInterpolant::evaluate_reduced(SimplexId s, double* x, double* out) const
{
    const auto& K = mesh_.complex();

    // Pass to the smallest face containing the point.
    std::size_t m = K.vertices_of(s).size();
    for (std::size_t i = 0; i < m;) {
        if (m > 1 && x[i] <= kBarycentricTolerance) {
            s = K.facets_of(s)[i];
            std::copy(x + i + 1, x + m, x + i);
            --m;
            double sum = 0.0;
            for (std::size_t t = 0; t < m; ++t)
                sum += x[t];
            for (std::size_t t = 0; t < m; ++t)
                x[t] /= sum;
        } else {
            ++i;
        }
    }

    auto us = static_cast<std::size_t>(s);
    const double* mu_s = mu_.data() + us * k_;
    if (m == 1) {
        std::copy(mu_s, mu_s + k_, out);
        return;
    }

    const double* w = w_.data() + w_offset_[us];
    double dist = 0.0;
    for (std::size_t i = 0; i < m; ++i)
        dist = std::max(dist, std::abs(x[i] - w[i]));
    if (dist <= kBarycentricTolerance) {
        std::copy(mu_s, mu_s + k_, out);
        return;
    }

    // y = w + scale * (x - w) is where the ray from w through x leaves the
    // simplex, on the facet opposite vertex `exit`.
    std::size_t exit = m;
    double num = 0.0, den = 1.0; // scale = num / den
    for (std::size_t i = 0; i < m; ++i) {
        double d = w[i] - x[i];
        if (d > 0.0 && (exit == m || w[i] * den < num * d)) {
            num = w[i];
            den = d;
            exit = i;
        }
    }
    const double scale = num / den;
    std::array<double, kMaxDimension + 1> y;
    double sum = 0.0;
    for (std::size_t i = 0, t = 0; i < m; ++i) {
        if (i == exit)
            continue;
        y[t] = std::max(0.0, w[i] + scale * (x[i] - w[i]));
        sum += y[t++];
    }
    const double inv = 1.0 / sum;
    for (std::size_t i = 0; i + 1 < m; ++i)
        y[i] *= inv;
    s = K.facets_of(s)[exit];

    std::array<double, 32> at_y;
    evaluate_reduced(s, y.data(), at_y.data());

    // x sits at fraction 1/scale of the way from w to y.
    const double t = den / num;
    for (std::size_t j = 0; j < k_; ++j) {
        double hi = mu_s[j];
        double lo = at_y[j];
        double v = hi + t * (lo - hi);
        out[j] = std::clamp(v, lo, hi);
    }
}

std::vector<double> evaluate_linear(const MeshWithFunction& mesh, const CarrierPoint& point)
{
    const auto& K = mesh.complex();
    const auto& phi = mesh.function();
    validate_point(K, point);
    auto vs = K.vertices_of(point.simplex);
    const std::size_t k = phi.components();
    std::vector<double> out(k, 0.0), lo(k, INFINITY), hi(k, -INFINITY);
    for (std::size_t i = 0; i < vs.size(); ++i)
        for (std::size_t j = 0; j < k; ++j) {
            double v = phi.at(vs[i], j);
            out[j] += point.weights[i] * v;
            lo[j] = std::min(lo[j], v);
            hi[j] = std::max(hi[j], v);
        }
    for (std::size_t j = 0; j < k; ++j)
        out[j] = std::clamp(out[j], lo[j], hi[j]);
    return out;
}

} // namespace axw
