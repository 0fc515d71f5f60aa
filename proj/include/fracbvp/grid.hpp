#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

namespace fracbvp {

/// Samples of a function at the uniform nodes t_j = j/(n-1), j = 0..n-1, on [0,1].
class GridFunction {
public:
    /// Takes ownership of the samples. Requires at least two nodes and all
    /// values finite.
    explicit GridFunction(std::vector<double> values) : values_(std::move(values)) {
        if (values_.size() < 2) {
            throw std::invalid_argument("grid function needs at least 2 nodes");
        }
        for (double v : values_) {
            if (!std::isfinite(v)) {
                throw std::invalid_argument("grid function values must be finite");
            }
        }
    }

    static GridFunction zeros(std::size_t n_nodes) {
        return GridFunction(std::vector<double>(n_nodes, 0.0));
    }

    /// Samples fn(t_j) at every node.
    template <typename F>
    static GridFunction sample(std::size_t n_nodes, F&& fn) {
        if (n_nodes < 2) throw std::invalid_argument("grid function needs at least 2 nodes");
        std::vector<double> values(n_nodes);
        for (std::size_t j = 0; j < n_nodes; ++j) {
            values[j] = fn(static_cast<double>(j) / static_cast<double>(n_nodes - 1));
        }
        return GridFunction(std::move(values));
    }

    std::size_t n_nodes() const { return values_.size(); }
    double spacing() const { return 1.0 / static_cast<double>(values_.size() - 1); }
    double node(std::size_t j) const {
        return static_cast<double>(j) / static_cast<double>(values_.size() - 1);
    }
    double operator[](std::size_t j) const { return values_[j]; }
    const std::vector<double>& values() const { return values_; }

    /// Piecewise-linear interpolant at t in [0,1].
    double interpolate(double t) const {
        if (!(t >= 0.0 && t <= 1.0)) {
            throw std::domain_error("interpolation point outside [0,1]");
        }
        const std::size_t last = values_.size() - 1;
        double scaled = t * static_cast<double>(last);
        auto j = static_cast<std::size_t>(scaled);
        if (j >= last) return values_[last];
        double frac = scaled - static_cast<double>(j);
        return values_[j] + frac * (values_[j + 1] - values_[j]);
    }

    double max_abs() const {
        double m = 0.0;
        for (double v : values_) m = std::max(m, std::abs(v));
        return m;
    }

private:
    std::vector<double> values_;
};

/// Grid resolutions: n_nodes for solver grids, oversample as the refinement
/// factor for certificate constants and sup norms.
struct QuadratureConfig {
    std::size_t n_nodes = 1025;
    int oversample = 4;

    /// Node count of the refined grid; spacing is spacing/oversample and both
    /// endpoints stay on the grid.
    std::size_t oversampled_nodes() const {
        return (n_nodes - 1) * static_cast<std::size_t>(oversample) + 1;
    }

    void validate() const {
        if (n_nodes < 33) throw std::invalid_argument("n_nodes must be at least 33");
        if (oversample < 1) throw std::invalid_argument("oversample must be at least 1");
    }
};

} // namespace fracbvp
