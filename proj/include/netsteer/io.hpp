#ifndef NETSTEER_IO_HPP
#define NETSTEER_IO_HPP

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "netsteer/assemblage.hpp"
#include "netsteer/optimizer.hpp"
#include "netsteer/scenario.hpp"
#include "netsteer/sdp/solver.hpp"

namespace netsteer {

using Json = nlohmann::ordered_json;

// %.12g in the C locale
std::string format_number(double v);

// {"re": [[...]], "im": [[...]]}
Json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const Json& j);

// settings, outcomes, trusted_dims and the members in flat (setting-major) order
Json assemblage_to_json(const Assemblage& a);
Assemblage assemblage_from_json(const Json& j);

Json topology_to_json(const NetworkTopology& t);
NetworkTopology topology_from_json(const Json& j);

// Parameter vector plus the structural metadata needed to rebuild the model.
Json checkpoint_to_json(const ParametrizedModel& model);
ParametrizedModel checkpoint_from_json(const Json& j);

// iteration,loss,distance,residual (plus restart) with a header row
void write_loss_trace_csv(std::ostream& out, const std::vector<LossTracePoint>& trace);

Json sdp_problem_to_json(const SdpProblem& p);
Json sdp_solution_to_json(const SdpProblem& p, const SdpSolution& s);

Json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const Json& j);

}  // namespace netsteer

#endif  // NETSTEER_IO_HPP
