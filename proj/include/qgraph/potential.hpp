#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace qgraph {

// Piecewise-constant potential on the unit interval [0, 1].
//
// Stored as breakpoints 0 = x_0 < x_1 < ... < x_m = 1 and one value per piece
// [x_{i-1}, x_i). The default is the zero potential with a single piece.
class EdgePotential {
public:
    EdgePotential() : breakpoints_{0.0, 1.0}, values_{0.0} {}

    EdgePotential(std::vector<double> breakpoints, std::vector<double> values)
        : breakpoints_(std::move(breakpoints)), values_(std::move(values)) {
        if (breakpoints_.size() < 2)
            throw std::invalid_argument("potential needs at least two breakpoints");
        if (breakpoints_.front() != 0.0 || breakpoints_.back() != 1.0)
            throw std::invalid_argument("potential breakpoints must start at 0 and end at 1");
        for (std::size_t i = 1; i < breakpoints_.size(); ++i)
            if (!(breakpoints_[i - 1] < breakpoints_[i]))
                throw std::invalid_argument("potential breakpoints must be strictly increasing");
        if (values_.size() + 1 != breakpoints_.size())
            throw std::invalid_argument("potential needs exactly one value per piece");
    }

    static EdgePotential zero() { return EdgePotential(); }

    static EdgePotential constant(double q) {
        return EdgePotential({0.0, 1.0}, {q});
    }

    const std::vector<double>& breakpoints() const { return breakpoints_; }
    const std::vector<double>& values() const { return values_; }
    std::size_t piece_count() const { return values_.size(); }

    double piece_length(std::size_t i) const {
        return breakpoints_[i + 1] - breakpoints_[i];
    }

    double integral() const {
        double total = 0.0;
        for (std::size_t i = 0; i < values_.size(); ++i)
            total += values_[i] * piece_length(i);
        return total;
    }

    double min_value() const {
        double m = values_.front();
        for (double v : values_)
            if (v < m) m = v;
        return m;
    }

    bool is_constant() const {
        for (double v : values_)
            if (v != values_.front()) return false;
        return true;
    }

    // The potential q + c on the same breakpoints.
    EdgePotential shifted(double c) const {
        std::vector<double> vals = values_;
        for (double& v : vals) v += c;
        return EdgePotential(breakpoints_, std::move(vals));
    }

private:
    std::vector<double> breakpoints_;
    std::vector<double> values_;
};

}  // namespace qgraph
