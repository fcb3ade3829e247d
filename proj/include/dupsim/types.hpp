#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace dupsim {

// Simulation clock. Integer microseconds so that event ordering and all
// derived timestamps are exact across platforms.
using Time = std::int64_t;

constexpr Time kUsPerMs = 1000;

constexpr Time ms(double v) { return static_cast<Time>(v * 1000.0 + (v >= 0 ? 0.5 : -0.5)); }
constexpr double to_ms(Time t) { return static_cast<double>(t) / 1000.0; }

// Next slot boundary at or after t (t must be non negative).
constexpr Time next_boundary(Time t, Time tti) { return ((t + tti - 1) / tti) * tti; }

enum class Direction : std::uint8_t { Downlink, Uplink };

enum class BearerKind : std::uint8_t { Mcg, Scg, Split, Duplicate, Srb };

// How the two legs of a duplicated bearer are realized.
enum class DupMode : std::uint8_t { None, Dc, Ca };

enum class Scenario : std::uint8_t { S1, S2, S3, S1Ca, HandoverDemo };

std::string to_string(Direction d);
std::string to_string(BearerKind k);
std::string to_string(Scenario s);
bool parse_scenario(const std::string& s, Scenario& out);
bool parse_direction(const std::string& s, Direction& out);

// Invalid user supplied configuration. The CLI maps this to exit code 2.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Internal consistency failure (stalled event queue, protocol invariant
// violation). Never caused by user input.
class SimError : public std::runtime_error {
public:
    explicit SimError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace dupsim
