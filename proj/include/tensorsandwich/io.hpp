#pragma once

#include <string>

#include "tensorsandwich/cp_model.hpp"
#include "tensorsandwich/dense_tensor.hpp"

namespace ts {

/// Tensor container (versioned, little-endian binary):
///   bytes 0-7   magic "TNSR0001"
///   bytes 8-31  int64 n1, n2, n3
///   then        n1*n2*n3 float64 values, row-major: (i*n2 + j)*n3 + k
void write_tensor(const DenseTensor3& t, const std::string& path);
DenseTensor3 read_tensor(const std::string& path);

/// CP model container (versioned, little-endian binary):
///   bytes 0-7   magic "CPFM0001"
///   bytes 8-39  int64 n1, n2, n3, r
///   then        A (n1*r), B (n2*r), C (n3*r) float64 blocks, each row-major
void write_model(const CPModel& model, const std::string& path);
CPModel read_model(const std::string& path);

}  // namespace ts
