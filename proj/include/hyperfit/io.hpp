#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include <json.hpp>

#include "hyperfit/estimators.hpp"
#include "hyperfit/experiments.hpp"
#include "hyperfit/moments.hpp"
#include "hyperfit/multidegree.hpp"
#include "hyperfit/transforms.hpp"

namespace hyperfit {

using Json = nlohmann::json;

/// Headerless CSV, one point per row, period decimal separator. Blank lines are skipped.
/// Throws FormatError with the line number on ragged rows or unparsable numbers.
PointSet read_points_csv(std::istream& in);
PointSet read_points_csv_file(const std::string& path);
/// %.17g, so reading back reproduces every value exactly.
void write_points_csv(std::ostream& out, const PointSet& points);
/// Matrix with a header row naming the basis monomials.
void write_matrix_csv(std::ostream& out, const Eigen::MatrixXd& m, const MultidegreeMatrix& labels);

Json to_json(const MultidegreeMatrix& a);
MultidegreeMatrix multidegree_matrix_from_json(const Json& j);
Json to_json(const MomentArray& m);
Json to_json(const FitResult& r, const MultidegreeMatrix& a);
Json to_json(const InvarianceReport& r, const MultidegreeMatrix& a);

/// Shorthand ("triangular:2:2"), inline JSON (`[[2,0],[1,1]]` or
/// `{"monomials": [...], "F": [[...]]}`) or a path to a JSON file of either form.
FitBasis parse_basis_spec(const std::string& spec);

/// Reads the experiment keys; missing keys keep the defaults of ExperimentConfig.
ExperimentConfig experiment_config_from_json(const Json& j);
Json read_json_file(const std::string& path);

/// CLI flag, then HYPERFIT_SEED, then the config value.
std::uint64_t resolve_seed(std::optional<std::uint64_t> flag, std::uint64_t config_seed);

}  // namespace hyperfit
