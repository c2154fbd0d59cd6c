#include "avatar/sim/simulator.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include "avatar/errors.hpp"
#include "avatar/sim/synthesis.hpp"
#include "avatar/ssl/doa.hpp"

namespace avatar::sim {

namespace {

constexpr double kTickEpsilon = 1e-9;

std::int64_t tick_at_or_after(double time, double dt)
{
    return static_cast<std::int64_t>(std::ceil(time / dt - kTickEpsilon));
}

struct SegmentTicks
{
    const SpeechSegment* segment;
    Angle azimuth;
    std::int64_t start;
    std::int64_t end;
};

/// Per-tick raw sensing output.
struct Sensing
{
    ssl::VadDecision vad;
    std::vector<ssl::DoaEstimate> doas;
};

class Session
{
public:
    Session(const Scenario& scenario, const SimConfig& config)
        : scenario_(scenario),
          config_(config),
          rng_(scenario.seed),
          period_ticks_(std::max<std::int64_t>(1, std::llround(config.doa_period / config.dt))),
          heading_(scenario.initial_heading)
    {
        for (const SpeechSegment& s : scenario.schedule)
        {
            segments_.push_back({&s, scenario.find_attendee(s.attendee_id)->azimuth, tick_at_or_after(s.start, config.dt),
                                 tick_at_or_after(s.end, config.dt)});
        }
        robot_.heading = heading_;
    }

    Trace run()
    {
        const std::int64_t ticks = tick_at_or_after(scenario_.session_length(), config_.dt);
        for (std::int64_t k = 0; k < ticks; ++k)
        {
            tick(k);
        }
        return std::move(trace_);
    }

private:
    void log(Timestamp t, TracePayload payload)
    {
        trace_.events.push_back({t, heading_.degrees(), std::move(payload)});
    }

    Sensing sense_events(std::int64_t k, Timestamp t)
    {
        Sensing out;
        bool any = false;
        for (const SegmentTicks& s : segments_)
        {
            if (k < s.start || k >= s.end)
            {
                continue;
            }
            any = true;
            if ((k - s.start) % period_ticks_ == 0)
            {
                double azimuth = s.azimuth.degrees();
                if (scenario_.doa_noise_sigma > 0.0)
                {
                    azimuth += std::normal_distribution<double>(0.0, scenario_.doa_noise_sigma)(rng_);
                }
                out.doas.push_back({Angle(azimuth), t, 1.0});
            }
        }
        if (any)
        {
            if (!vad_active_)
            {
                onset_tick_ = k;
            }
            const double onset_time = static_cast<double>(onset_tick_) * config_.dt;
            out.vad = {true, 1.0, t.seconds() - onset_time};
        }
        return out;
    }

    Sensing sense_acoustic(std::int64_t k, Timestamp t)
    {
        Sensing out;
        const ssl::AudioFrame frame =
            synthesize_frame(scenario_, t, config_.dt, config_.geometry, config_.sample_rate);
        out.vad = ssl::detect_vad(frame, config_.vad_threshold, vad_state_);
        if (!out.vad.active)
        {
            return out;
        }
        if (!vad_active_)
        {
            onset_tick_ = k;
        }
        if ((k - onset_tick_) % period_ticks_ == 0)
        {
            const ssl::AudioFrame analysis =
                synthesize_frame(scenario_, t, config_.analysis_window, config_.geometry, config_.sample_rate);
            try
            {
                out.doas.push_back(ssl::estimate_doa(analysis, config_.geometry, config_.vad_threshold));
            }
            catch (const NoPeak&)
            {
            }
            catch (const NoVoiceActivity&)
            {
            }
        }
        return out;
    }

    void tick(std::int64_t k)
    {
        const Timestamp t(static_cast<double>(k) * config_.dt);
        TickSummary row{t.seconds(), heading_.degrees(), std::nullopt, std::nullopt};
        for (const Attendee& a : scenario_.attendees)
        {
            if (scenario_.is_speaking(a.id, t.seconds()))
            {
                row.active_speaker = a.id;
                break;
            }
        }

        Sensing sensed = config_.mode == SensingMode::Event ? sense_events(k, t) : sense_acoustic(k, t);
        if (sensed.vad.active && !vad_active_)
        {
            log(t, VadOnsetRecord{});
        }
        if (!sensed.vad.active && vad_active_)
        {
            log(t, VadOffsetRecord{});
        }
        vad_active_ = sensed.vad.active;

        std::vector<qualify::QualifiedDoa> qualified;
        for (const ssl::DoaEstimate& doa : sensed.doas)
        {
            log(t, DoaRawRecord{doa.angle, doa.confidence});
            auto result = qualify::qualify(std::move(qualifier_), doa, sensed.vad, config_.rules);
            qualifier_ = std::move(result.state);
            if (result.output)
            {
                log(t, DoaQualifiedRecord{result.output->angle, result.output->kind, result.output->source_cluster});
                qualified.push_back(*result.output);
            }
        }

        const auto faces =
            project_faces(scenario_, heading_, config_.camera, t, config_.lip_error_probability, rng_);
        if (!faces.empty())
        {
            log(t, FaceFrameRecord{faces});
        }

        robot_.heading = heading_;
        std::vector<attention::Event> events(qualified.begin(), qualified.end());
        if (events.empty())
        {
            if (robot_.raised_flags() > 0 || !faces.empty())
            {
                events.emplace_back(attention::FaceFrame{t, faces});
            }
            else
            {
                events.emplace_back(attention::Silence{t});
            }
        }
        for (const attention::Event& event : events)
        {
            auto result = attention::step(robot_, event, config_.camera);
            robot_ = std::move(result.state);
            if (result.command)
            {
                command_ = result.command;
                row.turn_reason = result.command->reason;
                log(t, TurnRecord{result.command->target, result.command->reason});
            }
        }

        integrate(k);
        trace_.summary.push_back(row);
    }

    void integrate(std::int64_t k)
    {
        if (!command_)
        {
            return;
        }
        const double remaining = signed_difference(heading_, command_->target);
        const double max_step = config_.max_turn_rate * config_.dt;
        if (std::abs(remaining) <= max_step)
        {
            heading_ = command_->target;
            command_.reset();
            log(Timestamp(static_cast<double>(k + 1) * config_.dt), HeadingReachedRecord{});
        }
        else
        {
            heading_ = heading_ + std::copysign(max_step, remaining);
        }
    }

    const Scenario& scenario_;
    const SimConfig& config_;
    std::mt19937_64 rng_;
    std::int64_t period_ticks_;
    std::vector<SegmentTicks> segments_;

    Angle heading_;
    attention::RobotState robot_;
    qualify::QualifierState qualifier_;
    std::optional<attention::TurnCommand> command_;
    ssl::VadState vad_state_;
    bool vad_active_ = false;
    std::int64_t onset_tick_ = 0;

    Trace trace_;
};

}  // namespace

std::string_view to_string(SensingMode mode) { return mode == SensingMode::Event ? "event" : "acoustic"; }

SensingMode sensing_mode_from_string(std::string_view name)
{
    if (name == "event")
    {
        return SensingMode::Event;
    }
    if (name == "acoustic")
    {
        return SensingMode::Acoustic;
    }
    throw std::invalid_argument("unknown sensing mode '" + std::string(name) + "'");
}

void SimConfig::validate() const
{
    if (!(dt > 0.0) || !std::isfinite(dt))
    {
        throw std::invalid_argument("dt must be positive");
    }
    if (!(max_turn_rate > 0.0) || !std::isfinite(max_turn_rate))
    {
        throw std::invalid_argument("max_turn_rate must be positive");
    }
    if (!(doa_period > 0.0) || !std::isfinite(doa_period))
    {
        throw std::invalid_argument("doa_period must be positive");
    }
    if (!(sample_rate > 0.0) || !std::isfinite(sample_rate))
    {
        throw std::invalid_argument("sample_rate must be positive");
    }
    if (!(analysis_window > 0.0) ||
        analysis_window * sample_rate < static_cast<double>(ssl::AudioFrame::kMinLength))
    {
        throw std::invalid_argument("analysis_window must cover at least " +
                                    std::to_string(ssl::AudioFrame::kMinLength) + " samples");
    }
    if (mode == SensingMode::Acoustic && dt * sample_rate < static_cast<double>(ssl::AudioFrame::kMinLength))
    {
        throw std::invalid_argument("dt must cover at least " + std::to_string(ssl::AudioFrame::kMinLength) +
                                    " samples in acoustic mode");
    }
    if (!(vad_threshold > 0.0))
    {
        throw std::invalid_argument("vad_threshold must be positive");
    }
    if (!(lip_error_probability >= 0.0 && lip_error_probability <= 1.0))
    {
        throw std::invalid_argument("lip_error_probability must lie in [0, 1]");
    }
    camera.validate();
    geometry.validate();
    rules.validate();
}

Trace run(const Scenario& scenario, const SimConfig& config)
{
    scenario.validate();
    config.validate();
    return Session(scenario, config).run();
}

}  // namespace avatar::sim
