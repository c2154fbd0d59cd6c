#pragma once

#include <iosfwd>
#include <optional>
#include <string_view>
#include <variant>
#include <vector>

#include "avatar/angle.hpp"
#include "avatar/attention.hpp"
#include "avatar/qualify.hpp"

namespace avatar::sim {

enum class TraceKind
{
    DoaRaw,
    DoaQualified,
    Turn,
    HeadingReached,
    FaceFrame,
    VadOnset,
    VadOffset,
};

std::string_view to_string(TraceKind kind);

struct DoaRawRecord
{
    Angle angle;
    double confidence = 1.0;
};

struct DoaQualifiedRecord
{
    Angle angle;
    qualify::TurnKind turn_kind = qualify::TurnKind::Direct;
    std::optional<int> cluster;
};

struct TurnRecord
{
    Angle target;
    attention::Action reason = attention::Action::Theta1;
};

struct HeadingReachedRecord
{
};

struct FaceFrameRecord
{
    std::vector<attention::FaceObservation> faces;
};

struct VadOnsetRecord
{
};

struct VadOffsetRecord
{
};

// Alternative order matches TraceKind.
using TracePayload = std::variant<DoaRawRecord, DoaQualifiedRecord, TurnRecord, HeadingReachedRecord, FaceFrameRecord,
                                  VadOnsetRecord, VadOffsetRecord>;

struct TraceEvent
{
    Timestamp time;
    double heading = 0.0;  ///< robot heading when the event was logged, degrees
    TracePayload payload;

    [[nodiscard]] TraceKind kind() const { return static_cast<TraceKind>(payload.index()); }
};

/// One row per simulation tick, for plotting.
struct TickSummary
{
    double time = 0.0;
    double heading = 0.0;
    std::optional<int> active_speaker;
    std::optional<attention::Action> turn_reason;
};

struct Trace
{
    std::vector<TraceEvent> events;
    std::vector<TickSummary> summary;
};

/// JSON Lines, one event per line with fields `t`, `kind`, `heading` and the
/// kind's payload fields.
void write_trace_jsonl(std::ostream& out, const Trace& trace);

/// Parses JSON Lines written by write_trace_jsonl. Throws TraceMismatch on
/// malformed lines.
Trace read_trace_jsonl(std::istream& in);

/// CSV with header `time,heading,active_speaker,turn_reason`.
void write_summary_csv(std::ostream& out, const Trace& trace);

}  // namespace avatar::sim
