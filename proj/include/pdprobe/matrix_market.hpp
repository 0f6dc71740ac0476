#ifndef PDPROBE_MATRIX_MARKET_HPP
#define PDPROBE_MATRIX_MARKET_HPP

#include "pdprobe/operator.hpp"

#include <filesystem>
#include <istream>
#include <ostream>
#include <variant>

namespace pdprobe {

/// Coordinate files load as sparse, array files as dense.
using LoadedMatrix = std::variant<SparseSymmetricMatrix, DenseSymmetricMatrix>;

Index dim(const LoadedMatrix& m);
SymmetricOperator make_operator(const LoadedMatrix& m);

/// Reads "%%MatrixMarket matrix {coordinate|array} {real|double|integer} symmetric".
/// Coordinate entries must lie on or below the diagonal and appear once.
/// Errors are ParseError with the offending 1-based line.
LoadedMatrix read_matrix_market(std::istream& in);
LoadedMatrix load_matrix_market(const std::filesystem::path& path);

/// Writes the nonzero lower triangle in symmetric coordinate format with
/// shortest round-trip decimal values.
void write_matrix_market(const SparseSymmetricMatrix& m, std::ostream& out);
void write_matrix_market(const DenseSymmetricMatrix& m, std::ostream& out);
void save_matrix_market(const SparseSymmetricMatrix& m, const std::filesystem::path& path);
void save_matrix_market(const DenseSymmetricMatrix& m, const std::filesystem::path& path);

}  // namespace pdprobe

#endif  // PDPROBE_MATRIX_MARKET_HPP
