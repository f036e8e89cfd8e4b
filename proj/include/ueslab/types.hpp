#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace ueslab {

using Vector = std::vector<double>;

/// Time-varying vector field x' = f(t, x).
using Rhs = std::function<Vector(double, const Vector&)>;

/// Dense row-major square matrix, sized for the small n used by cost maps.
struct Matrix {
    std::size_t n = 0;
    std::vector<double> data;

    Matrix() = default;
    explicit Matrix(std::size_t size) : n(size), data(size * size, 0.0) {}

    double& operator()(std::size_t i, std::size_t j) { return data[i * n + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data[i * n + j]; }
};

double norm(const Vector& v);
double max_abs(const Vector& v);

}  // namespace ueslab
