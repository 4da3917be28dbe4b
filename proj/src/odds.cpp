#include "betsim/odds.hpp"

#include <stdexcept>

namespace betsim {

const char* to_string(BetCategory category) {
    switch (category) {
        case BetCategory::fav_correct: return "fav_correct";
        case BetCategory::dog_correct: return "dog_correct";
        case BetCategory::pickem_correct: return "pickem_correct";
        case BetCategory::incorrect: return "incorrect";
    }
    return "unknown";
}

Rational pickem_payout() { return Rational(10000, 110); }

Rational pickem_swing() { return Rational(100) + pickem_payout(); }

MoneyLine canonicalize(const RawQuote& quote) {
    if (quote.fav_team.empty() || quote.dog_team.empty() || quote.fav_team == quote.dog_team)
        throw std::invalid_argument("canonicalize: quote needs two distinct teams (book " +
                                    quote.book_id + ")");
    MoneyLine line;
    line.fav_team = quote.fav_team;
    line.dog_team = quote.dog_team;
    if (quote.fav_line == kPickemFavLine && quote.dog_line == kPickemDogLine) {
        line.is_pickem = true;
        line.fav_payout = pickem_payout();
        line.dog_payout = pickem_payout();
        return line;
    }
    if (quote.fav_line < 100)
        throw std::invalid_argument("canonicalize: fav_line " + std::to_string(quote.fav_line) +
                                    " below 100 (book " + quote.book_id + ")");
    if (quote.dog_line < 100)
        throw std::invalid_argument("canonicalize: dog_line " + std::to_string(quote.dog_line) +
                                    " below 100 and not the Pick 'em sentinel (book " +
                                    quote.book_id + ")");
    line.fav_payout = Rational(10000, quote.fav_line);
    line.dog_payout = Rational(quote.dog_line);
    return line;
}

MoneyLine conservative_merge(const std::vector<MoneyLine>& quotes) {
    if (quotes.empty()) throw std::invalid_argument("conservative_merge: no quotes");
    MoneyLine merged = quotes.front();
    for (std::size_t i = 1; i < quotes.size(); ++i) {
        const MoneyLine& q = quotes[i];
        if (q.fav_team != merged.fav_team || q.dog_team != merged.dog_team)
            throw std::invalid_argument(
                "conservative_merge: books disagree on favorite designation (" + merged.fav_team +
                "/" + merged.dog_team + " vs " + q.fav_team + "/" + q.dog_team + ")");
        if (q.is_pickem != merged.is_pickem)
            throw std::invalid_argument("conservative_merge: books disagree on Pick 'em status for " +
                                        merged.fav_team + "/" + merged.dog_team);
        if (q.fav_payout < merged.fav_payout) merged.fav_payout = q.fav_payout;
        if (q.dog_payout < merged.dog_payout) merged.dog_payout = q.dog_payout;
    }
    return merged;
}

BetOutcome settle(const MoneyLine& line, const std::string& pick, const std::string& winner) {
    if (!line.has_team(pick))
        throw std::invalid_argument("settle: pick '" + pick + "' is not a participant");
    if (!line.has_team(winner))
        throw std::invalid_argument("settle: winner '" + winner + "' is not a participant");
    BetOutcome out;
    if (pick != winner) {
        out.category = BetCategory::incorrect;
        out.delta = Rational(-100);
    } else if (line.is_pickem) {
        out.category = BetCategory::pickem_correct;
        out.delta = pickem_payout();
    } else if (pick == line.fav_team) {
        out.category = BetCategory::fav_correct;
        out.delta = line.fav_payout;
    } else {
        out.category = BetCategory::dog_correct;
        out.delta = line.dog_payout;
    }
    return out;
}

}  // namespace betsim
