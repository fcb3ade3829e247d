#include "dupsim/types.hpp"

namespace dupsim {

std::string to_string(Direction d) {
    return d == Direction::Downlink ? "downlink" : "uplink";
}

std::string to_string(BearerKind k) {
    switch (k) {
    case BearerKind::Mcg: return "mcg";
    case BearerKind::Scg: return "scg";
    case BearerKind::Split: return "split";
    case BearerKind::Duplicate: return "duplicate";
    case BearerKind::Srb: return "srb";
    }
    return "?";
}

std::string to_string(Scenario s) {
    switch (s) {
    case Scenario::S1: return "S1";
    case Scenario::S2: return "S2";
    case Scenario::S3: return "S3";
    case Scenario::S1Ca: return "S1_CA";
    case Scenario::HandoverDemo: return "handover-demo";
    }
    return "?";
}

bool parse_scenario(const std::string& s, Scenario& out) {
    if (s == "S1") out = Scenario::S1;
    else if (s == "S2") out = Scenario::S2;
    else if (s == "S3") out = Scenario::S3;
    else if (s == "S1_CA") out = Scenario::S1Ca;
    else if (s == "handover-demo") out = Scenario::HandoverDemo;
    else return false;
    return true;
}

bool parse_direction(const std::string& s, Direction& out) {
    if (s == "dl" || s == "downlink") out = Direction::Downlink;
    else if (s == "ul" || s == "uplink") out = Direction::Uplink;
    else return false;
    return true;
}

} // namespace dupsim
