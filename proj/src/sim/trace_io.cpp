#include "avatar/sim/trace.hpp"

#include <array>
#include <istream>
#include <ostream>
#include <string>

#include <nlohmann/json.hpp>

#include "avatar/errors.hpp"

namespace avatar::sim {

namespace {

using nlohmann::ordered_json;

template <class... Ts>
struct Overloaded : Ts...
{
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

constexpr std::array kKindNames{"DoaRaw", "DoaQualified", "Turn", "HeadingReached", "FaceFrame", "VadOnset", "VadOffset"};

TraceKind kind_from_string(std::string_view name)
{
    for (std::size_t i = 0; i < kKindNames.size(); ++i)
    {
        if (name == kKindNames[i])
        {
            return static_cast<TraceKind>(i);
        }
    }
    throw TraceMismatch("unknown trace event kind '" + std::string(name) + "'");
}

ordered_json to_json(const TraceEvent& event)
{
    ordered_json line;
    line["t"] = event.time.seconds();
    line["kind"] = to_string(event.kind());
    line["heading"] = event.heading;
    std::visit(Overloaded{
                   [&](const DoaRawRecord& r) {
                       line["angle"] = r.angle.degrees();
                       line["confidence"] = r.confidence;
                   },
                   [&](const DoaQualifiedRecord& r) {
                       line["angle"] = r.angle.degrees();
                       line["turn_kind"] = qualify::to_string(r.turn_kind);
                       line["cluster"] = r.cluster ? ordered_json(*r.cluster) : ordered_json(nullptr);
                   },
                   [&](const TurnRecord& r) {
                       line["target"] = r.target.degrees();
                       line["reason"] = attention::to_string(r.reason);
                   },
                   [&](const FaceFrameRecord& r) {
                       line["faces"] = ordered_json::array();
                       for (const auto& f : r.faces)
                       {
                           line["faces"].push_back({{"id", f.face_id},
                                                    {"x", f.box_center_x},
                                                    {"width", f.box_width},
                                                    {"lips", f.lips_moving}});
                       }
                   },
                   [](const auto&) {},
               },
               event.payload);
    return line;
}

TraceEvent from_json(const nlohmann::json& line)
{
    TraceEvent event;
    event.time = Timestamp(line.at("t").get<double>());
    event.heading = line.at("heading").get<double>();
    switch (kind_from_string(line.at("kind").get<std::string>()))
    {
        case TraceKind::DoaRaw:
            event.payload = DoaRawRecord{Angle(line.at("angle").get<double>()), line.at("confidence").get<double>()};
            break;
        case TraceKind::DoaQualified:
        {
            DoaQualifiedRecord r{Angle(line.at("angle").get<double>()),
                                 qualify::turn_kind_from_string(line.at("turn_kind").get<std::string>()), std::nullopt};
            if (line.contains("cluster") && !line.at("cluster").is_null())
            {
                r.cluster = line.at("cluster").get<int>();
            }
            event.payload = r;
            break;
        }
        case TraceKind::Turn:
            event.payload = TurnRecord{Angle(line.at("target").get<double>()),
                                       attention::action_from_string(line.at("reason").get<std::string>())};
            break;
        case TraceKind::HeadingReached:
            event.payload = HeadingReachedRecord{};
            break;
        case TraceKind::FaceFrame:
        {
            FaceFrameRecord r;
            for (const auto& f : line.at("faces"))
            {
                r.faces.push_back({f.at("id").get<int>(), f.at("x").get<double>(), f.at("width").get<double>(),
                                   f.at("lips").get<bool>()});
            }
            event.payload = r;
            break;
        }
        case TraceKind::VadOnset:
            event.payload = VadOnsetRecord{};
            break;
        case TraceKind::VadOffset:
            event.payload = VadOffsetRecord{};
            break;
    }
    return event;
}

}  // namespace

std::string_view to_string(TraceKind kind) { return kKindNames.at(static_cast<std::size_t>(kind)); }

void write_trace_jsonl(std::ostream& out, const Trace& trace)
{
    for (const TraceEvent& event : trace.events)
    {
        out << to_json(event).dump() << '\n';
    }
}

Trace read_trace_jsonl(std::istream& in)
{
    Trace trace;
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line))
    {
        ++number;
        if (line.find_first_not_of(" \t\r") == std::string::npos)
        {
            continue;
        }
        try
        {
            trace.events.push_back(from_json(nlohmann::json::parse(line)));
        }
        catch (const TraceMismatch&)
        {
            throw;
        }
        catch (const std::exception& e)
        {
            throw TraceMismatch("trace line " + std::to_string(number) + ": " + e.what());
        }
    }
    return trace;
}

void write_summary_csv(std::ostream& out, const Trace& trace)
{
    out << "time,heading,active_speaker,turn_reason\n";
    for (const TickSummary& row : trace.summary)
    {
        out << ordered_json(row.time).dump() << ',' << ordered_json(row.heading).dump() << ',';
        if (row.active_speaker)
        {
            out << *row.active_speaker;
        }
        out << ',';
        if (row.turn_reason)
        {
            out << attention::to_string(*row.turn_reason);
        }
        out << '\n';
    }
}

}  // namespace avatar::sim
