#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "etalerep/action.hpp"
#include "etalerep/fractafold.hpp"
#include "etalerep/graph.hpp"
#include "etalerep/koopman.hpp"
#include "etalerep/measures.hpp"
#include "etalerep/norms.hpp"

namespace etalerep {

using Json = nlohmann::json;

// Exit-code contract: 0 all checks pass, 1 a check failed, 2 inconclusive
// (norm schedule not stabilized), 3 input error.
inline constexpr int exit_pass = 0;
inline constexpr int exit_check_failed = 1;
inline constexpr int exit_inconclusive = 2;
inline constexpr int exit_input_error = 3;

inline constexpr const char* convention_note =
    "src(e) = s(e) and dst(e) = r(e); paths compose with dst(e_{i+1}) = src(e_i); "
    "beware that parts of the graph-algebra literature swap r and s";

// Common envelope: schema version, command echo, seed, thread count,
// convention note. Deterministic for identical inputs.
Json report_envelope(const std::string& command, std::uint64_t seed);

std::string serialize_report(const Json& report);

// Atomic write: temp file in the target directory, then rename.
void write_report_file(const Json& report, const std::string& path);

Json graph_to_json(const DirectedGraph& g);
DirectedGraph graph_from_json(const Json& j);

Json weights_to_json(const DirectedGraph& g, const MarkovWeights& w);
MarkovWeights weights_from_json(const DirectedGraph& g, const Json& j);

Json element_to_json(const DirectedGraph& g, const AlgebraElement& f);
AlgebraElement element_from_json(const DirectedGraph& g, const Json& j);

Json path_to_json(const DirectedGraph& g, const Path& p);
Path path_from_json(const DirectedGraph& g, const Json& j);

Json ifs_to_json(const IFSSpec& spec);
IFSSpec ifs_from_json(const Json& j);

Json cell_to_json(const FractafoldCell& cell);
FractafoldCell cell_from_json(const Json& j);

Json koopman_to_json(const DirectedGraph& g, const MarkovWeights& w, const KoopmanOp& op);
Json ck_report_to_json(const CkReport& r);
Json kernel_report_to_json(const DirectedGraph& g, const KernelReport& r);
Json norm_report_to_json(const NormReport& r);
Json validation_to_json(const ValidationReport& r);

}  // namespace etalerep
