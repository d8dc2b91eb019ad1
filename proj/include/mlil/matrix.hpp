#ifndef MLIL_MATRIX_HPP
#define MLIL_MATRIX_HPP

#include <cstdint>
#include <span>
#include <vector>

namespace mlil {

/// Dense row-major real matrix (scores, C/S matrices, ...).
struct Matrix {
    std::size_t rows = 0, cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), data(r * c, fill) {}

    double& at(std::size_t i, std::size_t j) { return data[i * cols + j]; }
    double at(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
    std::span<const double> row(std::size_t i) const { return {data.data() + i * cols, cols}; }
};

/// Dense row-major bit matrix (labels, predictions).
struct BitMatrix {
    std::size_t rows = 0, cols = 0;
    std::vector<std::uint8_t> data;

    BitMatrix() = default;
    BitMatrix(std::size_t r, std::size_t c, std::uint8_t fill = 0)
        : rows(r), cols(c), data(r * c, fill) {}

    std::uint8_t& at(std::size_t i, std::size_t j) { return data[i * cols + j]; }
    std::uint8_t at(std::size_t i, std::size_t j) const { return data[i * cols + j]; }

    bool operator==(const BitMatrix&) const = default;
};

} // namespace mlil

#endif
