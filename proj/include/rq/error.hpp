#pragma once

#include <stdexcept>
#include <string>

namespace rq {

// Typed failure reasons. Degenerate or non-generic inputs are rejected with
// one of these rather than silently regularized.
enum class errc {
  non_finite,
  singular_form,
  degenerate_config,
  degenerate_pencil,
  not_on_quadric,
  root_count_mismatch,
  rank_deficient,
  free_point_failed,
  refinement_diverged,
  signature_borderline,
  not_real_set,
  ambiguous_pairing,
  point_off_curve,
  inconsistent_input,
  tracing_stalled,
  parity_unachievable,
  degenerate_crossing,
  degenerate_fiber,
  family_check_failed,
  count_short,
  no_solution_found,
  parse_error,
  bad_argument,
};

inline const char* errc_name(errc c) {
  switch (c) {
    case errc::non_finite: return "NonFinite";
    case errc::singular_form: return "SingularForm";
    case errc::degenerate_config: return "DegenerateConfig";
    case errc::degenerate_pencil: return "DegeneratePencil";
    case errc::not_on_quadric: return "NotOnQuadric";
    case errc::root_count_mismatch: return "RootCountMismatch";
    case errc::rank_deficient: return "RankDeficient";
    case errc::free_point_failed: return "FreePointFailed";
    case errc::refinement_diverged: return "RefinementDiverged";
    case errc::signature_borderline: return "SignatureBorderline";
    case errc::not_real_set: return "NotRealSet";
    case errc::ambiguous_pairing: return "AmbiguousPairing";
    case errc::point_off_curve: return "PointOffCurve";
    case errc::inconsistent_input: return "InconsistentInput";
    case errc::tracing_stalled: return "TracingStalled";
    case errc::parity_unachievable: return "ParityUnachievable";
    case errc::degenerate_crossing: return "DegenerateCrossing";
    case errc::degenerate_fiber: return "DegenerateFiber";
    case errc::family_check_failed: return "FamilyCheckFailed";
    case errc::count_short: return "CountShort";
    case errc::no_solution_found: return "NoSolutionFound";
    case errc::parse_error: return "ParseError";
    case errc::bad_argument: return "BadArgument";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
  errc code() const { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) { throw Error(code, what); }

}  // namespace rq
