#pragma once

#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "avatar/angle.hpp"
#include "avatar/ssl/types.hpp"

namespace avatar::qualify {

/// Which earlier event the gap rule measures from.
enum class GapReference
{
    RawDoa,        ///< previous raw estimate (default)
    QualifiedDoa,  ///< previous qualified output
};

struct RuleConfig
{
    double gap_threshold = 2.0;            ///< seconds
    double angle_threshold = 5.0;          ///< degrees
    double speech_activity_min = 4.0;      ///< seconds of contiguous VAD
    double cluster_join_threshold = 20.0;  ///< degrees
    GapReference gap_reference = GapReference::RawDoa;

    void validate() const;
};

struct Cluster
{
    int id = 0;
    Angle center;
    std::vector<Angle> member_angles;
    Timestamp last_active;
    // Running resultant of the members' unit vectors.
    double sum_cos = 0.0;
    double sum_sin = 0.0;
};

enum class TurnKind
{
    Direct,
    Neutral,
    ClusterAverage,
};

std::string_view to_string(TurnKind kind);
TurnKind turn_kind_from_string(std::string_view name);

struct QualifiedDoa
{
    Angle angle;
    Timestamp timestamp;
    TurnKind kind = TurnKind::Direct;
    std::optional<int> source_cluster;

    friend bool operator==(const QualifiedDoa&, const QualifiedDoa&) = default;
};

struct TimedAngle
{
    Angle angle;
    Timestamp timestamp;
};

struct QualifierState
{
    std::optional<TimedAngle> last_doa;
    std::optional<QualifiedDoa> last_qualified;
    std::vector<Cluster> clusters;
    /// Contiguous VAD time attributed to the cluster of the latest DOA.
    double vad_run_length = 0.0;
    /// Cluster that owns the current VAD run and the VAD duration at which it took over.
    std::optional<int> run_cluster;
    double run_offset = 0.0;
};

/// Adds `doa` to the nearest cluster within the join threshold (ties toward the
/// lower id) and recomputes that cluster's circular mean, or opens a new cluster.
std::pair<int, QualifierState> assign_cluster(QualifierState state, const ssl::DoaEstimate& doa, const RuleConfig& cfg);

/// True when the contiguous VAD run is strictly longer than the configured minimum.
bool detect_speech_activity(const QualifierState& state, const ssl::VadDecision& vad, const RuleConfig& cfg);

struct QualifyResult
{
    std::optional<QualifiedDoa> output;
    QualifierState state;
};

/// Applies the turn rules to one raw DOA, in order:
///   1. sustained speech from the DOA's cluster -> ClusterAverage at its center;
///   2. short gap and a large jump from the previous DOA -> Neutral midpoint;
///   3. long gap (or first DOA) and a large jump from the current target -> Direct;
///   4. otherwise nothing.
/// The clustering and the previous-DOA memory are updated in every case.
QualifyResult qualify(QualifierState state, const ssl::DoaEstimate& doa, const ssl::VadDecision& vad,
                      const RuleConfig& cfg);

}  // namespace avatar::qualify
