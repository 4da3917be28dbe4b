#pragma once

namespace betsim {

// Where a team played, from its own perspective; matches themselves are
// either at the home team's floor or neutral.
enum class Venue { home, away, neutral };

inline const char* to_string(Venue venue) {
    switch (venue) {
        case Venue::home: return "home";
        case Venue::away: return "away";
        case Venue::neutral: return "neutral";
    }
    return "unknown";
}

}  // namespace betsim
