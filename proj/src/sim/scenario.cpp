#include "avatar/sim/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <set>
#include <stdexcept>

#include "avatar/errors.hpp"

namespace avatar::sim {

namespace {
constexpr double kTrailingSilence = 5.0;
}

double Scenario::session_length() const
{
    if (duration)
    {
        return *duration;
    }
    double last = 0.0;
    for (const SpeechSegment& s : schedule)
    {
        last = std::max(last, s.end);
    }
    return last + kTrailingSilence;
}

const Attendee* Scenario::find_attendee(int id) const
{
    const auto it = std::find_if(attendees.begin(), attendees.end(), [id](const Attendee& a) { return a.id == id; });
    return it == attendees.end() ? nullptr : &*it;
}

bool Scenario::is_speaking(int attendee_id, double t) const
{
    return std::any_of(schedule.begin(), schedule.end(), [&](const SpeechSegment& s) {
        return s.attendee_id == attendee_id && s.start <= t && t < s.end;
    });
}

void Scenario::validate() const
{
    std::set<int> ids;
    for (const Attendee& a : attendees)
    {
        if (!ids.insert(a.id).second)
        {
            throw InvalidScenario("duplicate attendee id " + std::to_string(a.id));
        }
        if (!(a.distance > 0.0))
        {
            throw InvalidScenario("attendee " + std::to_string(a.id) + " has non-positive distance");
        }
    }
    for (const SpeechSegment& s : schedule)
    {
        if (!ids.contains(s.attendee_id))
        {
            throw InvalidScenario("schedule references unknown attendee " + std::to_string(s.attendee_id));
        }
        if (!(s.start >= 0.0) || !(s.end > s.start))
        {
            throw InvalidScenario("segment of attendee " + std::to_string(s.attendee_id) + " must satisfy 0 <= start < end");
        }
    }
    for (std::size_t i = 0; i < schedule.size(); ++i)
    {
        for (std::size_t j = i + 1; j < schedule.size(); ++j)
        {
            const SpeechSegment& a = schedule[i];
            const SpeechSegment& b = schedule[j];
            if (a.attendee_id == b.attendee_id && a.start < b.end && b.start < a.end)
            {
                throw InvalidScenario("overlapping segments for attendee " + std::to_string(a.attendee_id));
            }
        }
    }
    if (!(doa_noise_sigma >= 0.0) || !std::isfinite(noise_snr_db) || !std::isfinite(initial_heading))
    {
        throw InvalidScenario("noise parameters and initial heading must be finite, sigma non-negative");
    }
    if (duration && !(*duration > 0.0))
    {
        throw InvalidScenario("duration must be positive");
    }
}

Scenario scenario_from_json(const nlohmann::json& doc)
{
    try
    {
        Scenario s;
        s.name = doc.value("name", std::string{});
        for (const auto& a : doc.at("attendees"))
        {
            s.attendees.push_back({a.at("id").get<int>(), Angle(a.at("azimuth").get<double>()), a.value("distance", 1.5)});
        }
        for (const auto& seg : doc.at("schedule"))
        {
            s.schedule.push_back({seg.at("attendee_id").get<int>(), seg.at("start").get<double>(), seg.at("end").get<double>()});
        }
        s.seed = doc.value("seed", std::uint64_t{0});
        s.noise_snr_db = doc.value("noise_snr_db", 30.0);
        s.doa_noise_sigma = doc.value("doa_noise_sigma", 0.0);
        s.initial_heading = doc.value("initial_heading", 0.0);
        if (doc.contains("duration"))
        {
            s.duration = doc.at("duration").get<double>();
        }
        return s;
    }
    catch (const nlohmann::json::exception& e)
    {
        throw InvalidScenario(std::string("scenario schema: ") + e.what());
    }
    catch (const std::invalid_argument& e)
    {
        throw InvalidScenario(std::string("scenario value: ") + e.what());
    }
}

nlohmann::ordered_json scenario_to_json(const Scenario& scenario)
{
    nlohmann::ordered_json doc;
    doc["name"] = scenario.name;
    doc["seed"] = scenario.seed;
    doc["noise_snr_db"] = scenario.noise_snr_db;
    doc["doa_noise_sigma"] = scenario.doa_noise_sigma;
    doc["initial_heading"] = scenario.initial_heading;
    if (scenario.duration)
    {
        doc["duration"] = *scenario.duration;
    }
    doc["attendees"] = nlohmann::ordered_json::array();
    for (const Attendee& a : scenario.attendees)
    {
        doc["attendees"].push_back({{"id", a.id}, {"azimuth", a.azimuth.degrees()}, {"distance", a.distance}});
    }
    doc["schedule"] = nlohmann::ordered_json::array();
    for (const SpeechSegment& seg : scenario.schedule)
    {
        doc["schedule"].push_back({{"attendee_id", seg.attendee_id}, {"start", seg.start}, {"end", seg.end}});
    }
    return doc;
}

Scenario load_scenario(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
    {
        throw std::runtime_error("cannot open scenario " + path.string());
    }
    nlohmann::json doc;
    try
    {
        in >> doc;
    }
    catch (const nlohmann::json::parse_error& e)
    {
        throw InvalidScenario(std::string("scenario parse error: ") + e.what());
    }
    Scenario scenario = scenario_from_json(doc);
    scenario.validate();
    return scenario;
}

Scenario generate_scenario(const GeneratorOptions& options)
{
    if (options.attendees < 1 || !(options.duration > 0.0))
    {
        throw std::invalid_argument("generator needs at least one attendee and a positive duration");
    }
    std::mt19937_64 rng(options.seed);
    std::uniform_real_distribution<double> jitter(-8.0, 8.0);
    std::uniform_real_distribution<double> distance(1.0, 2.5);
    std::uniform_real_distribution<double> utterance(1.0, 8.0);
    std::uniform_real_distribution<double> pause(0.3, 4.0);
    std::uniform_int_distribution<int> who(0, options.attendees - 1);

    Scenario s;
    s.name = "generated-" + std::to_string(options.attendees) + "-" + std::to_string(options.seed);
    s.seed = options.seed;
    s.doa_noise_sigma = options.doa_noise_sigma;
    s.duration = options.duration;
    const double spacing = 360.0 / options.attendees;
    for (int i = 0; i < options.attendees; ++i)
    {
        s.attendees.push_back({i, Angle(spacing * i + spacing / 2.0 + jitter(rng)), distance(rng)});
    }

    double t = pause(rng);
    while (true)
    {
        const double end = t + utterance(rng);
        if (end > options.duration - 2.0)
        {
            break;
        }
        // Round to milliseconds so the schedule survives a JSON round trip unchanged.
        const double start_ms = std::round(t * 1000.0) / 1000.0;
        const double end_ms = std::round(end * 1000.0) / 1000.0;
        s.schedule.push_back({who(rng), start_ms, end_ms});
        t = end + pause(rng);
    }
    s.validate();
    return s;
}

}  // namespace avatar::sim
