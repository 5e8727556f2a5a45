#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ratapprox/aaa.hpp"
#include "ratapprox/loewner.hpp"
#include "ratapprox/types.hpp"
#include "ratapprox/vectorfit.hpp"

namespace ratapprox {

using RationalModel = std::variant<loewner::StateSpaceModel, aaa::BarycentricModel, vf::PoleResidueModel>;

Complex evaluate(const RationalModel& model, Complex s);
PolesZeros poles_zeros(const RationalModel& model);
std::size_t model_order(const RationalModel& model);
/// "state_space", "barycentric" or "pole_residue".
std::string_view model_type(const RationalModel& model);

/// JSON object with a "type" field, the model fields as [re, im] pairs
/// (state-space matrices as lists of rows) and a free-form "meta" object.
std::string model_to_json(const RationalModel& model, const std::string& meta_json = "{}");
RationalModel model_from_json(std::string_view text);

void write_model(const std::string& path, const RationalModel& model, const std::string& meta_json = "{}");
RationalModel read_model(const std::string& path);

/// CSV `index,sigma,sigma_normalized` with 1-based indices.
void write_singular_values_csv(std::ostream& os, const RealVector& sigma, std::string_view metadata = {});

} // namespace ratapprox
