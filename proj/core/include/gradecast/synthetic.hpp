#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace gradecast {

/// Options for a synthetic table with the column layout of the public
/// student-success dataset (37 semicolon-separated columns, same header).
struct SyntheticOptions {
    std::size_t rows = 4424;
    std::uint64_t seed = 1;
    double missing_fraction = 0.0;  // share of predictor cells left empty
    std::size_t invalid_rows = 0;   // rows given an out-of-range age
};

/// The 37 column names in file order. "Daytime/evening attendance" carries
/// the trailing tab found in the published file.
const std::vector<std::string>& reference_header();

/// Delimited text with a header line. Grades follow a latent-ability model so
/// the second-semester grade is learnable from the other columns.
std::string synthetic_reference_csv(const SyntheticOptions& options = {});

}  // namespace gradecast
