#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "vekua/discriminant.hpp"

namespace vekua {

/// Three-valued answer to "is Pu = f solvable for every admissible f?".
enum class Solvability { SOLVABLE, NOT_SOLVABLE, UNDETERMINED };

inline std::string to_string(Solvability s) {
    switch (s) {
        case Solvability::SOLVABLE: return "SOLVABLE";
        case Solvability::NOT_SOLVABLE: return "NOT_SOLVABLE";
        case Solvability::UNDETERMINED: return "UNDETERMINED";
    }
    return "?";
}

/// Provenance of a verdict: a matched theorem hypothesis (decisive) or
/// finite scan evidence (never decisive, however suggestive).
enum class CertificationKind { THEOREM, EVIDENCE };

inline std::string to_string(CertificationKind k) {
    return k == CertificationKind::THEOREM ? "THEOREM" : "EVIDENCE";
}

struct Certification {
    CertificationKind kind = CertificationKind::EVIDENCE;
    /// Name of the matched theorem condition ("heat", "wave(i)", ...).
    std::string theorem;
    /// The hypotheses that were actually verified, in plain words.
    std::vector<std::string> conditions;
    /// The scan backing an EVIDENCE grade.
    std::optional<DiscriminantScanReport> scan;
};

inline Certification theorem_certification(std::string name, std::vector<std::string> conditions) {
    Certification c;
    c.kind = CertificationKind::THEOREM;
    c.theorem = std::move(name);
    c.conditions = std::move(conditions);
    return c;
}

inline Certification evidence_certification(DiscriminantScanReport scan) {
    Certification c;
    c.kind = CertificationKind::EVIDENCE;
    c.scan = std::move(scan);
    return c;
}

/// One evaluated condition, recorded in evaluation order with the data it
/// was decided on.
struct ConditionCheck {
    std::string condition;
    bool holds = false;
    std::string data;
};

/// Final answer of a classifier.  Solvability and global hypoellipticity
/// coincide for every constant-coefficient operator handled here, so the
/// two fields are always equal; make_verdict enforces that by construction.
struct Verdict {
    Solvability solvable = Solvability::UNDETERMINED;
    Solvability globally_hypoelliptic = Solvability::UNDETERMINED;
    Certification certification;
    std::vector<ConditionCheck> trace;
    std::string summary;
};

inline Verdict make_verdict(Solvability s, Certification cert, std::vector<ConditionCheck> trace,
                            std::string summary) {
    Verdict v;
    v.solvable = s;
    v.globally_hypoelliptic = s;
    v.certification = std::move(cert);
    v.trace = std::move(trace);
    v.summary = std::move(summary);
    return v;
}

}  // namespace vekua
