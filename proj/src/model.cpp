#include "lfd/model.hpp"

#include <cmath>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "lfd/csv.hpp"

namespace lfd {

namespace {

using nlohmann::json;

json vector_to_json(const Eigen::VectorXd& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

Eigen::VectorXd vector_from_json(const json& arr) {
  Eigen::VectorXd v(arr.size());
  for (std::size_t i = 0; i < arr.size(); ++i) v[static_cast<Eigen::Index>(i)] = arr[i].get<double>();
  return v;
}

json matrix_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    rows.push_back(vector_to_json(m.row(i).transpose()));
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const json& rows, Eigen::Index cols_hint) {
  const Eigen::Index r = static_cast<Eigen::Index>(rows.size());
  Eigen::Index c = cols_hint;
  if (r > 0) c = static_cast<Eigen::Index>(rows[0].size());
  Eigen::MatrixXd m(r, c);
  for (Eigen::Index i = 0; i < r; ++i) {
    if (static_cast<Eigen::Index>(rows[static_cast<std::size_t>(i)].size()) != c) {
      throw std::runtime_error("model: ragged matrix rows");
    }
    m.row(i) = vector_from_json(rows[static_cast<std::size_t>(i)]).transpose();
  }
  return m;
}

json gmm_to_json(const JointGmm& jg) {
  json comps = json::array();
  for (const auto& comp : jg.gmm.components()) {
    comps.push_back({{"prior", comp.prior},
                     {"mean", vector_to_json(comp.mean)},
                     {"covariance", matrix_to_json(comp.covariance)}});
  }
  return {{"joint", jg.joint},
          {"t_min", jg.t_min},
          {"t_max", jg.t_max},
          {"components", comps}};
}

JointGmm gmm_from_json(const json& obj) {
  std::vector<GaussianComponent> comps;
  for (const auto& comp : obj.at("components")) {
    GaussianComponent gc;
    gc.prior = comp.at("prior").get<double>();
    gc.mean = vector_from_json(comp.at("mean"));
    gc.covariance = matrix_from_json(comp.at("covariance"), gc.mean.size());
    comps.push_back(std::move(gc));
  }
  return JointGmm{Gmm(std::move(comps)), obj.at("joint").get<int>(),
                  obj.at("t_min").get<double>(),
                  obj.at("t_max").get<double>()};
}

json spring_to_json(const SpringModel& s) {
  return {{"tau", s.tau},
          {"alpha_z", s.alpha_z},
          {"beta_z", s.beta_z},
          {"y0", s.y0},
          {"g", s.g},
          {"forcing",
           {{"alpha_x", s.forcing.alpha_x},
            {"centers", vector_to_json(s.forcing.centers)},
            {"widths", vector_to_json(s.forcing.widths)},
            {"weights", vector_to_json(s.forcing.weights)},
            {"silent", s.forcing.silent}}}};
}

SpringModel spring_from_json(const json& obj) {
  SpringModel s;
  s.tau = obj.at("tau").get<double>();
  s.alpha_z = obj.at("alpha_z").get<double>();
  s.beta_z = obj.at("beta_z").get<double>();
  s.y0 = obj.at("y0").get<double>();
  s.g = obj.at("g").get<double>();
  const json& f = obj.at("forcing");
  s.forcing.alpha_x = f.at("alpha_x").get<double>();
  s.forcing.centers = vector_from_json(f.at("centers"));
  s.forcing.widths = vector_from_json(f.at("widths"));
  s.forcing.weights = vector_from_json(f.at("weights"));
  s.forcing.silent = f.at("silent").get<bool>();
  return s;
}

}  // namespace

void MotionModel::validate() const {
  if (dof < 1) {
    throw std::invalid_argument("model: dof must be positive");
  }
  if (static_cast<int>(gmms.size()) != dof ||
      static_cast<int>(springs.size()) != dof || gmr.dof() != dof) {
    throw std::invalid_argument("model: per-joint pieces disagree with dof");
  }
  if (k_star < 1) {
    throw std::invalid_argument("model: k_star must be positive");
  }
  if (!(alpha_z > 0.0) || n_basis < 2) {
    throw std::invalid_argument("model: spring parameters out of range");
  }
  if (gmr.length() < 2) {
    throw std::invalid_argument("model: generalized trajectory too short");
  }
  if (!gmr.means.allFinite()) {
    throw std::invalid_argument("model: non-finite trajectory values");
  }
  for (int j = 0; j < dof; ++j) {
    const SpringModel& s = springs[j];
    if (!(s.tau > 0.0)) {
      throw std::invalid_argument("model: spring tau must be positive");
    }
    if (!(s.alpha_z > 0.0) || s.beta_z != 0.25 * s.alpha_z) {
      throw std::invalid_argument(
          "model: spring damping must satisfy beta_z = alpha_z / 4");
    }
    if (s.forcing.size() < 2 ||
        s.forcing.centers.size() != s.forcing.widths.size() ||
        s.forcing.centers.size() != s.forcing.weights.size()) {
      throw std::invalid_argument("model: malformed forcing basis");
    }
    if (gmms[j].joint != j) {
      throw std::invalid_argument("model: joint mixtures out of order");
    }
    if (!(gmms[j].t_max > gmms[j].t_min)) {
      throw std::invalid_argument("model: empty mixture time span");
    }
  }
}

void save_model(const MotionModel& model, const std::filesystem::path& path) {
  model.validate();
  json joints = json::array();
  for (int j = 0; j < model.dof; ++j) {
    joints.push_back({{"gmm", gmm_to_json(model.gmms[j])},
                      {"spring", spring_to_json(model.springs[j])}});
  }
  json provenance = json::object();
  for (const auto& [key, value] : model.provenance) provenance[key] = value;

  const json doc = {{"format_version", kModelFormatVersion},
                    {"dof", model.dof},
                    {"k_star", model.k_star},
                    {"alpha_z", model.alpha_z},
                    {"n_basis", model.n_basis},
                    {"seed", model.seed},
                    {"provenance", provenance},
                    {"joints", joints},
                    {"gmr",
                     {{"timestamps", json(model.gmr.timestamps)},
                      {"means", matrix_to_json(model.gmr.means)}}}};
  write_file_atomic(path, doc.dump(1) + "\n");
}

MotionModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open '" + path.string() + "'");
  }
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& err) {
    throw std::runtime_error("model '" + path.string() +
                             "': " + err.what());
  }

  const int version = doc.at("format_version").get<int>();
  if (version != kModelFormatVersion) {
    throw std::runtime_error(
        "model '" + path.string() + "': unsupported format_version " +
        std::to_string(version) + ", expected " +
        std::to_string(kModelFormatVersion));
  }

  MotionModel model;
  model.dof = doc.at("dof").get<int>();
  model.k_star = doc.at("k_star").get<int>();
  model.alpha_z = doc.at("alpha_z").get<double>();
  model.n_basis = doc.at("n_basis").get<int>();
  model.seed = doc.at("seed").get<std::uint64_t>();
  for (const auto& [key, value] : doc.at("provenance").items()) {
    model.provenance[key] = value.get<std::string>();
  }
  for (const auto& joint : doc.at("joints")) {
    model.gmms.push_back(gmm_from_json(joint.at("gmm")));
    model.springs.push_back(spring_from_json(joint.at("spring")));
  }
  model.gmr.timestamps =
      doc.at("gmr").at("timestamps").get<std::vector<double>>();
  model.gmr.means = matrix_from_json(doc.at("gmr").at("means"), model.dof);
  model.validate();
  return model;
}

std::string provenance_timestamp() {
  std::time_t now = std::time(nullptr);
  if (const char* env = std::getenv("SOURCE_DATE_EPOCH")) {
    char* end = nullptr;
    const long long pinned = std::strtoll(env, &end, 10);
    if (end && *end == '\0') now = static_cast<std::time_t>(pinned);
  }
  std::tm utc{};
  gmtime_r(&now, &utc);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &utc);
  return buf;
}

}  // namespace lfd
