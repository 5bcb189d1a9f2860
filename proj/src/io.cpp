#include "netsteer/io.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>

#include "netsteer/errors.hpp"

namespace netsteer {

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

Json matrix_to_json(const ComplexMatrix& m) {
  Json re = Json::array(), im = Json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    Json rr = Json::array(), ir = Json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) {
      rr.push_back(m(r, c).real());
      ir.push_back(m(r, c).imag());
    }
    re.push_back(std::move(rr));
    im.push_back(std::move(ir));
  }
  return Json{{"re", std::move(re)}, {"im", std::move(im)}};
}

ComplexMatrix matrix_from_json(const Json& j) {
  try {
    const auto& re = j.at("re");
    const auto& im = j.at("im");
    const std::size_t rows = re.size();
    const std::size_t cols = rows == 0 ? 0 : re.at(0).size();
    if (im.size() != rows) throw StructuralError("matrix json: re/im row count mismatch");
    ComplexMatrix m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
      if (re.at(r).size() != cols || im.at(r).size() != cols) {
        throw StructuralError("matrix json: ragged rows");
      }
      for (std::size_t c = 0; c < cols; ++c) {
        m(r, c) = Complex(re[r][c].get<double>(), im[r][c].get<double>());
      }
    }
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw StructuralError(std::string("matrix json: ") + e.what());
  }
}

Json assemblage_to_json(const Assemblage& a) {
  Json members = Json::array();
  for (const auto& m : a.members()) members.push_back(matrix_to_json(m));
  return Json{{"settings", a.settings()},
              {"outcomes", a.outcomes()},
              {"trusted_dims", a.trusted_dims()},
              {"members", std::move(members)}};
}

Assemblage assemblage_from_json(const Json& j) {
  try {
    auto settings = j.at("settings").get<std::vector<std::size_t>>();
    auto outcomes = j.at("outcomes").get<std::vector<std::size_t>>();
    auto dims = j.at("trusted_dims").get<Dims>();
    std::vector<ComplexMatrix> members;
    for (const auto& m : j.at("members")) members.push_back(matrix_from_json(m));
    return Assemblage(std::move(settings), std::move(outcomes), std::move(dims), std::move(members));
  } catch (const nlohmann::json::exception& e) {
    throw StructuralError(std::string("assemblage json: ") + e.what());
  }
}

Json topology_to_json(const NetworkTopology& t) {
  return Json{{"source_count", t.source_count},
              {"untrusted_count", t.untrusted_count},
              {"trusted_count", t.trusted_count},
              {"incidence_untrusted", t.incidence_untrusted},
              {"incidence_trusted", t.incidence_trusted},
              {"settings", t.settings},
              {"outcomes", t.outcomes}};
}

NetworkTopology topology_from_json(const Json& j) {
  try {
    NetworkTopology t;
    t.source_count = j.at("source_count").get<std::size_t>();
    t.untrusted_count = j.at("untrusted_count").get<std::size_t>();
    t.trusted_count = j.at("trusted_count").get<std::size_t>();
    t.incidence_untrusted = j.at("incidence_untrusted").get<std::vector<std::vector<int>>>();
    t.incidence_trusted = j.at("incidence_trusted").get<std::vector<std::vector<int>>>();
    t.settings = j.at("settings").get<std::vector<std::size_t>>();
    t.outcomes = j.at("outcomes").get<std::vector<std::size_t>>();
    t.validate();
    return t;
  } catch (const nlohmann::json::exception& e) {
    throw StructuralError(std::string("topology json: ") + e.what());
  }
}

Json checkpoint_to_json(const ParametrizedModel& model) {
  const auto& shape = model.shape();
  return Json{{"format", "netsteer-model-checkpoint"},
              {"version", 1},
              {"topology", topology_to_json(shape.topology)},
              {"trusted_dims", shape.trusted_dims},
              {"hidden_cardinalities", shape.hidden.cardinalities},
              {"hidden_width", model.hidden_width()},
              {"parameters", model.parameters()}};
}

ParametrizedModel checkpoint_from_json(const Json& j) {
  try {
    if (j.at("format").get<std::string>() != "netsteer-model-checkpoint") {
      throw StructuralError("checkpoint json: unknown format");
    }
    HiddenVariableSpec hidden{j.at("hidden_cardinalities").get<std::vector<std::size_t>>()};
    const auto shape = ModelShape::make(topology_from_json(j.at("topology")),
                                        j.at("trusted_dims").get<Dims>(), hidden);
    ParametrizedModel model(shape, j.at("hidden_width").get<std::size_t>());
    auto theta = j.at("parameters").get<std::vector<double>>();
    if (theta.size() != model.parameter_count()) {
      throw StructuralError("checkpoint json: parameter count does not match the structure");
    }
    model.parameters() = std::move(theta);
    return model;
  } catch (const nlohmann::json::exception& e) {
    throw StructuralError(std::string("checkpoint json: ") + e.what());
  }
}

void write_loss_trace_csv(std::ostream& out, const std::vector<LossTracePoint>& trace) {
  out << "restart,iteration,loss,distance,residual\n";
  for (const auto& p : trace) {
    out << p.restart << ',' << p.iteration << ',' << format_number(p.loss) << ','
        << format_number(p.distance) << ',' << format_number(p.residual) << '\n';
  }
}

namespace {

std::string cone_name(ConeKind k) {
  switch (k) {
    case ConeKind::psd: return "psd";
    case ConeKind::nonnegative: return "nonnegative";
    case ConeKind::free: return "free";
  }
  return "unknown";
}

}  // namespace

Json sdp_problem_to_json(const SdpProblem& p) {
  Json blocks = Json::array();
  for (const auto& b : p.blocks()) {
    blocks.push_back(Json{{"name", b.name}, {"cone", cone_name(b.kind)}, {"dim", b.dim},
                          {"offset", b.offset}, {"size", b.size}});
  }
  Json rows = Json::array();
  for (const auto& c : p.constraints()) {
    Json vars = Json::array(), coeffs = Json::array();
    for (const auto& t : c.terms) {
      vars.push_back(t.variable);
      coeffs.push_back(t.coefficient);
    }
    rows.push_back(Json{{"variables", std::move(vars)}, {"coefficients", std::move(coeffs)}, {"rhs", c.rhs}});
  }
  return Json{{"variable_count", p.variable_count()},
              {"coordinates", "hermitian blocks: diagonal, then sqrt2*Re and sqrt2*Im of the upper triangle"},
              {"blocks", std::move(blocks)},
              {"objective", p.objective()},
              {"constraints", std::move(rows)}};
}

Json sdp_solution_to_json(const SdpProblem& p, const SdpSolution& s) {
  Json blocks = Json::object();
  for (std::size_t b = 0; b < p.blocks().size(); ++b) {
    const auto& blk = p.block(b);
    const std::string key = blk.name.empty() ? "block" + std::to_string(b) : blk.name;
    if (blk.kind == ConeKind::psd) {
      blocks[key] = matrix_to_json(s.matrix(p, b));
    } else {
      blocks[key] = std::vector<double>(s.x.begin() + blk.offset, s.x.begin() + blk.offset + blk.size);
    }
  }
  return Json{{"status", to_string(s.status)},
              {"objective", s.objective},
              {"primal_residual", s.primal_residual},
              {"dual_residual", s.dual_residual},
              {"iterations", s.iterations},
              {"blocks", std::move(blocks)}};
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw StructuralError("cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw StructuralError(path.string() + ": " + e.what());
  }
}

void write_json_file(const std::filesystem::path& path, const Json& j) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw StructuralError("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

}  // namespace netsteer
