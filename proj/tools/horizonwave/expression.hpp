#pragma once

#include <memory>
#include <span>
#include <string>

#include "horizonwave/field.hpp"

namespace horizonwave::cli {

/// Closed-form initial data: numbers, pi, coordinates x, y (or x0, x1, ...),
/// + - * / ^, parentheses and cos/sin/exp/sqrt/log plus the Bessel
/// functions J0/J1.
class Expression {
public:
    struct Node;

    static Expression parse(const std::string& text);

    double evaluate(std::span<const double> x) const;
    /// Largest coordinate index referenced, -1 for constants.
    int max_coordinate() const;
    const std::string& text() const noexcept { return text_; }

private:
    std::shared_ptr<const Node> root_;
    std::string text_;
};

/// Samples the expression on the torus grid and projects onto the spectrum.
Field field_from_expression(const SpatialTorus& torus, const std::string& text);

/// Value of a coordinate-free expression such as "2*pi".
double constant_expression(const std::string& text);

}  // namespace horizonwave::cli
