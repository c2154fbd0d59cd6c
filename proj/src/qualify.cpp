#include "avatar/qualify.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "avatar/errors.hpp"

namespace avatar::qualify {

namespace {

constexpr double kDegenerateResultant = 1e-9;
constexpr double kRadToDeg = 180.0 / 3.14159265358979323846;

void recenter(Cluster& cluster)
{
    if (std::hypot(cluster.sum_cos, cluster.sum_sin) <= kDegenerateResultant)
    {
        cluster.center = cluster.member_angles.front();
        return;
    }
    cluster.center = Angle(std::atan2(cluster.sum_sin, cluster.sum_cos) * kRadToDeg);
}

Cluster& cluster_by_id(QualifierState& state, int id)
{
    for (Cluster& c : state.clusters)
    {
        if (c.id == id)
        {
            return c;
        }
    }
    throw std::logic_error("unknown cluster id " + std::to_string(id));
}

/// Attributes the current VAD run to the DOA's cluster and returns its length.
double update_speech_run(QualifierState& state, int cluster, const ssl::DoaEstimate& doa, const ssl::VadDecision& vad)
{
    if (!vad.active)
    {
        state.run_cluster.reset();
        state.run_offset = 0.0;
        return 0.0;
    }
    // The run began no later than doa.t - duration; a previous DOA before that
    // instant belongs to an earlier run.
    const bool fresh_run = !state.last_doa || state.last_doa->timestamp.seconds() < doa.timestamp.seconds() - vad.duration_so_far;
    if (fresh_run)
    {
        state.run_cluster = cluster;
        state.run_offset = 0.0;
    }
    else if (state.run_cluster != cluster)
    {
        state.run_cluster = cluster;
        state.run_offset = vad.duration_so_far;
    }
    return vad.duration_so_far - state.run_offset;
}

}  // namespace

void RuleConfig::validate() const
{
    if (!(gap_threshold > 0.0) || !(angle_threshold > 0.0) || !(speech_activity_min > 0.0) ||
        !(cluster_join_threshold > 0.0))
    {
        throw std::invalid_argument("rule thresholds must be strictly positive");
    }
    if (!(angle_threshold < 180.0) || !(cluster_join_threshold < 180.0))
    {
        throw std::invalid_argument("angle thresholds must be below 180 degrees");
    }
}

std::string_view to_string(TurnKind kind)
{
    switch (kind)
    {
        case TurnKind::Direct:
            return "Direct";
        case TurnKind::Neutral:
            return "Neutral";
        case TurnKind::ClusterAverage:
            return "ClusterAverage";
    }
    return "?";
}

TurnKind turn_kind_from_string(std::string_view name)
{
    if (name == "Direct")
    {
        return TurnKind::Direct;
    }
    if (name == "Neutral")
    {
        return TurnKind::Neutral;
    }
    if (name == "ClusterAverage")
    {
        return TurnKind::ClusterAverage;
    }
    throw std::invalid_argument("unknown turn kind '" + std::string(name) + "'");
}

std::pair<int, QualifierState> assign_cluster(QualifierState state, const ssl::DoaEstimate& doa, const RuleConfig& cfg)
{
    Cluster* nearest = nullptr;
    double nearest_distance = std::numeric_limits<double>::infinity();
    for (Cluster& c : state.clusters)
    {
        const double d = angular_distance(c.center, doa.angle);
        if (d < nearest_distance || (d == nearest_distance && nearest != nullptr && c.id < nearest->id))
        {
            nearest = &c;
            nearest_distance = d;
        }
    }

    if (nearest == nullptr || nearest_distance > cfg.cluster_join_threshold)
    {
        Cluster fresh;
        fresh.id = static_cast<int>(state.clusters.size());
        state.clusters.push_back(std::move(fresh));
        nearest = &state.clusters.back();
    }

    nearest->member_angles.push_back(doa.angle);
    nearest->sum_cos += std::cos(doa.angle.radians());
    nearest->sum_sin += std::sin(doa.angle.radians());
    nearest->last_active = doa.timestamp;
    recenter(*nearest);
    const int id = nearest->id;
    return {id, std::move(state)};
}

bool detect_speech_activity(const QualifierState& /*state*/, const ssl::VadDecision& vad, const RuleConfig& cfg)
{
    return vad.active && vad.duration_so_far > cfg.speech_activity_min;
}

QualifyResult qualify(QualifierState state, const ssl::DoaEstimate& doa, const ssl::VadDecision& vad,
                      const RuleConfig& cfg)
{
    if (state.last_doa && doa.timestamp < state.last_doa->timestamp)
    {
        throw std::invalid_argument("DOA timestamps must be non-decreasing");
    }

    auto [cluster_id, next] = assign_cluster(std::move(state), doa, cfg);
    next.vad_run_length = update_speech_run(next, cluster_id, doa, vad);

    std::optional<TimedAngle> gap_origin = next.last_doa;
    if (cfg.gap_reference == GapReference::QualifiedDoa)
    {
        gap_origin.reset();
        if (next.last_qualified)
        {
            gap_origin = TimedAngle{next.last_qualified->angle, next.last_qualified->timestamp};
        }
    }
    const std::optional<double> gap =
        gap_origin ? std::optional<double>(doa.timestamp - gap_origin->timestamp) : std::nullopt;

    std::optional<QualifiedDoa> output;
    const ssl::VadDecision cluster_vad{vad.active, vad.energy, next.vad_run_length};
    if (detect_speech_activity(next, cluster_vad, cfg))
    {
        output = QualifiedDoa{cluster_by_id(next, cluster_id).center, doa.timestamp, TurnKind::ClusterAverage, cluster_id};
    }
    else if (next.last_doa && gap && *gap < cfg.gap_threshold &&
             angular_distance(next.last_doa->angle, doa.angle) > cfg.angle_threshold)
    {
        Angle neutral = next.last_doa->angle;
        try
        {
            neutral = circular_midpoint(next.last_doa->angle, doa.angle);
        }
        catch (const DegenerateMean&)
        {
            // Antipodal pair: keep the earlier direction.
        }
        output = QualifiedDoa{neutral, doa.timestamp, TurnKind::Neutral, std::nullopt};
    }
    else if ((!gap || *gap >= cfg.gap_threshold) &&
             (!next.last_qualified || angular_distance(next.last_qualified->angle, doa.angle) > cfg.angle_threshold))
    {
        output = QualifiedDoa{doa.angle, doa.timestamp, TurnKind::Direct, std::nullopt};
    }

    next.last_doa = TimedAngle{doa.angle, doa.timestamp};
    if (output)
    {
        next.last_qualified = output;
    }
    return {output, std::move(next)};
}

}  // namespace avatar::qualify
