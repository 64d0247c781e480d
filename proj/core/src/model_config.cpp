#include "dsvar/model_config.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace dsvar {

using nlohmann::json;

namespace {

Matrix matrix_from_json(const json& j, const std::string& what) {
  if (!j.is_array() || j.empty()) throw ParameterError("model config: '" + what + "' must be a nested array");
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = static_cast<Eigen::Index>(j.front().size());
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const json& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols)
      throw ParameterError("model config: '" + what + "' is ragged");
    for (Eigen::Index k = 0; k < cols; ++k) m(i, k) = row[static_cast<std::size_t>(k)].get<double>();
  }
  return m;
}

json matrix_to_json(const Matrix& m) {
  json out = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
    out.push_back(row);
  }
  return out;
}

ShockSpec shock_from_json(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "stable") return StableSpec{j.at("alpha").get<double>(), j.value("beta", 0.0)};
  if (kind == "pareto") return ParetoSpec{j.at("alpha").get<double>()};
  if (kind == "student_t" || kind == "t")
    return StudentTSpec{j.at("dof").get<double>(), j.value("standardized", true)};
  if (kind == "pearson")
    return PearsonMomentsSpec{j.value("mean", 0.0), j.value("variance", 1.0), j.at("skewness").get<double>(),
                              j.at("kurtosis").get<double>()};
  if (kind == "gaussian" || kind == "normal") return GaussianSpec{};
  throw ParameterError("model config: unknown shock kind '" + kind + "'");
}

json shock_to_json(const ShockSpec& spec) {
  if (const auto* s = std::get_if<StableSpec>(&spec)) return {{"kind", "stable"}, {"alpha", s->alpha}, {"beta", s->beta_skew}};
  if (const auto* s = std::get_if<ParetoSpec>(&spec)) return {{"kind", "pareto"}, {"alpha", s->alpha}};
  if (const auto* s = std::get_if<StudentTSpec>(&spec))
    return {{"kind", "student_t"}, {"dof", s->dof}, {"standardized", s->standardized}};
  if (const auto* s = std::get_if<PearsonMomentsSpec>(&spec))
    return {{"kind", "pearson"}, {"mean", s->mean}, {"variance", s->variance}, {"skewness", s->skewness},
            {"kurtosis", s->kurtosis}};
  return {{"kind", "gaussian"}};
}

}  // namespace

SvarModel model_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("model config: ") + e.what(), 0);
  }

  try {
    if (j.contains("design")) {
      const std::string d = j.at("design").get<std::string>();
      const std::string noise = j.value("noise", std::string("HL"));
      const MixingDesign md = d == "LT" ? MixingDesign::LowerTriangular : MixingDesign::NotLowerTriangular;
      if (d != "LT" && d != "NLT") throw ParameterError("model config: design must be NLT or LT");
      if (noise != "HL" && noise != "LL") throw ParameterError("model config: noise must be HL or LL");
      SvarModel m = design_model(md, noise == "HL" ? NoiseDesign::HeavyLight : NoiseDesign::LightLight,
                                 j.value("heavy_alpha", 1.1));
      validate(m);
      return m;
    }

    SvarModel m;
    for (const auto& a : j.at("A")) m.lag_matrices.push_back(matrix_from_json(a, "A"));
    if (j.contains("B")) {
      m.mixing = matrix_from_json(j.at("B"), "B");
    } else {
      const Matrix w_init = matrix_from_json(j.at("W_init"), "W_init");
      const std::string how = j.value("normalize", std::string("unit_norm"));
      if (how == "unit_norm")
        m.mixing = normalize_w_rows_unit_norm(w_init).mixing;
      else if (how == "row_sum")
        m.mixing = normalize_w_rows_sum_one(w_init).mixing;
      else
        throw ParameterError("model config: normalize must be unit_norm or row_sum");
    }
    for (const auto& s : j.at("shocks")) m.shocks.push_back(shock_from_json(s));
    if (j.contains("names")) m.names = j.at("names").get<std::vector<std::string>>();
    if (j.contains("hl")) m.hl = HeavyLightScaling{j.at("hl").at("alpha").get<double>()};
    if (j.contains("p") && j.at("p").get<int>() != m.lag_order())
      throw ParameterError("model config: p disagrees with the number of A matrices");
    if (j.contains("n") && j.at("n").get<Eigen::Index>() != m.dimension())
      throw ParameterError("model config: n disagrees with the size of B");
    validate(m);
    return m;
  } catch (const json::exception& e) {
    throw ParameterError(std::string("model config: ") + e.what());
  }
}

std::string model_to_json(const SvarModel& model) {
  json j;
  j["p"] = model.lag_order();
  j["n"] = model.dimension();
  if (!model.names.empty()) j["names"] = model.names;
  j["A"] = json::array();
  for (const auto& a : model.lag_matrices) j["A"].push_back(matrix_to_json(a));
  j["B"] = matrix_to_json(model.mixing);
  j["shocks"] = json::array();
  for (const auto& s : model.shocks) j["shocks"].push_back(shock_to_json(s));
  if (model.hl) j["hl"] = {{"alpha", model.hl->alpha}};
  return j.dump(2);
}

SvarModel load_model_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("model config: cannot open " + path.string(), 0);
  std::stringstream ss;
  ss << in.rdbuf();
  return model_from_json(ss.str());
}

}  // namespace dsvar
