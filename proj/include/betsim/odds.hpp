#pragma once

#include <string>
#include <vector>

#include "betsim/rational.hpp"

namespace betsim {

// One book's quote as listed. The favorite line is bet-this-to-win-$100,
// the underdog line is win-this-per-$100-bet. The pair (110, -110) is the
// Pick 'em sentinel: no designated favorite, both sides pay 10000/110.
struct RawQuote {
    std::string book_id;
    std::string fav_team;
    std::string dog_team;
    int fav_line = 0;
    int dog_line = 0;
};

constexpr int kPickemFavLine = 110;
constexpr int kPickemDogLine = -110;

// Canonical per-match quote: dollars won per $100 stake on either side.
struct MoneyLine {
    std::string fav_team;
    std::string dog_team;
    Rational fav_payout;
    Rational dog_payout;
    bool is_pickem = false;

    bool has_team(const std::string& team) const {
        return team == fav_team || team == dog_team;
    }
};

enum class BetCategory { fav_correct, dog_correct, pickem_correct, incorrect };

const char* to_string(BetCategory category);

// Result of settling one $100 bet.
struct BetOutcome {
    BetCategory category = BetCategory::incorrect;
    Rational delta;

    bool correct() const { return category != BetCategory::incorrect; }
};

// 10000/110: what a $100 stake wins on either side of a Pick 'em.
Rational pickem_payout();

// Lost gain plus the lost stake, 100 + 10000/110: the worth of one Pick 'em
// coin flip in the best/worst envelope.
Rational pickem_swing();

// Converts a raw quote into pay-out form. Rejects fav_line < 100 and any
// dog_line below 100 other than the Pick 'em sentinel.
MoneyLine canonicalize(const RawQuote& quote);

// Element-wise minimum of the pay-outs across books: the merged line pays no
// more than any input line regardless of which side the bet lands on. All
// quotes must agree on the favorite/underdog designation and Pick 'em status.
MoneyLine conservative_merge(const std::vector<MoneyLine>& quotes);

// Settles a $100 bet on `pick` given the actual `winner`. Both must be
// participants of the line.
BetOutcome settle(const MoneyLine& line, const std::string& pick, const std::string& winner);

}  // namespace betsim
