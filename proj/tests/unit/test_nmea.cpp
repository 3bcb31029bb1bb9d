#include "doctest.h"

#include <cmath>
#include <random>
#include <string>

#include "crashlink/nmea.hpp"
#include "support/oracles.hpp"

using namespace crashlink;
using nmea::NmeaSentence;

namespace {

const char* kGgaExample =
    "$GPGGA,123519,4807.038,N,01131.000,E,1,08,0.9,545.4,M,46.9,M,,*47";
const char* kRmcExample =
    "$GPRMC,123519,A,4807.038,N,01131.000,E,022.4,084.4,230394,003.1,W*6A";

NmeaLine line(const std::string& raw) {
    return NmeaLine{{0}, raw};
}

}  // namespace

TEST_CASE("checksum folds payload bytes with xor") {
    // Values frozen from an independent implementation.
    CHECK(nmea::checksum("") == 0x00);
    CHECK(nmea::checksum("A") == 0x41);
    CHECK(nmea::checksum("GPGGA,123519,4807.038,N,01131.000,E,1,08,0.9,545.4,M,46.9,M,,") ==
          0x47);
    CHECK(nmea::checksum("GPRMC,123519,A,4807.038,N,01131.000,E,022.4,084.4,230394,003.1,W") ==
          0x6A);
}

TEST_CASE("parse accepts the canonical GGA and RMC shapes") {
    auto gga = nmea::parse_sentence(line(kGgaExample));
    REQUIRE(gga.ok());
    CHECK(gga.value().talker == "GP");
    CHECK(gga.value().type == "GGA");
    REQUIRE(gga.value().fields.size() == 14);
    CHECK(gga.value().fields[0] == "123519");
    CHECK(gga.value().fields[13] == "");
    CHECK(gga.value().checksum == 0x47);

    auto rmc = nmea::parse_sentence(line(kRmcExample));
    REQUIRE(rmc.ok());
    CHECK(rmc.value().type == "RMC");
    REQUIRE(rmc.value().fields.size() == 11);

    // A trailing terminator is tolerated and ignored.
    CHECK(nmea::parse_sentence(line(std::string(kGgaExample) + "\r\n")).ok());
}

TEST_CASE("parse rejects structural damage as Malformed") {
    CHECK(nmea::parse_sentence(line("$GPGGA,123519")).error().code == ErrCode::Malformed);
    CHECK(nmea::parse_sentence(line("$GPGGA,1*4")).error().code == ErrCode::Malformed);
    CHECK(nmea::parse_sentence(line("$GPGGA,1*4X7")).error().code == ErrCode::Malformed);
    CHECK(nmea::parse_sentence(line("$GPGG,1*0A")).error().code == ErrCode::Malformed);
    CHECK(nmea::parse_sentence(line("$GPGGAX,1*13")).error().code == ErrCode::Malformed);
    CHECK(nmea::parse_sentence(line(std::string("$GPGGA,1\x01*55"))).error().code ==
          ErrCode::Malformed);
    CHECK(nmea::parse_sentence(line("$*00")).error().code == ErrCode::Malformed);
}

TEST_CASE("parse reports both checksum bytes on a mismatch") {
    auto r = nmea::parse_sentence(
        line("$GPGGA,123519,4807.038,N,01131.000,E,1,08,0.9,545.4,M,46.9,M,,*46"));
    REQUIRE_FALSE(r.ok());
    CHECK(r.error().code == ErrCode::ChecksumMismatch);
    CHECK(r.error().expected == 0x47);
    CHECK(r.error().found == 0x46);
}

TEST_CASE("checksum is verified before the sentence type is considered") {
    // A GSV sentence with a corrupted checksum is a checksum problem, not
    // an unsupported-type problem.
    auto bad = nmea::parse_sentence(
        line("$GPGSV,2,1,08,01,40,083,46,02,17,308,41,12,07,344,39,14,22,228,45*00"));
    CHECK(bad.error().code == ErrCode::ChecksumMismatch);

    auto good = nmea::parse_sentence(
        line("$GPGSV,2,1,08,01,40,083,46,02,17,308,41,12,07,344,39,14,22,228,45*75"));
    CHECK(good.error().code == ErrCode::Unsupported);
}

TEST_CASE("coordinate conversion matches the frozen decimal values") {
    auto s = nmea::make_sentence(
        "GP", "GGA",
        {"120000", "2323.5000", "N", "09147.0000", "W", "1", "08", "0.9", "12.0",
         "M", "0.0", "M", "", ""});
    auto fix = nmea::to_geo_fix(s, {7000});
    REQUIRE(fix.ok());
    CHECK(fix.value().lat == doctest::Approx(23.391666666666666).epsilon(1e-12));
    CHECK(fix.value().lon == doctest::Approx(-91.78333333333333).epsilon(1e-12));
    CHECK(fix.value().t == Timestamp{7000});
    CHECK_FALSE(fix.value().stale);
}

TEST_CASE("fix extraction respects quality and status flags") {
    auto no_fix_gga = nmea::parse_sentence(line("$GPGGA,120000,,,,,0,00,,,M,,M,,*65"));
    REQUIRE(no_fix_gga.ok());
    CHECK(nmea::to_geo_fix(no_fix_gga.value(), {0}).error().code == ErrCode::NoFix);

    auto void_rmc = nmea::parse_sentence(line("$GPRMC,120000,V,,,,,,,230394,,*3D"));
    REQUIRE(void_rmc.ok());
    CHECK(nmea::to_geo_fix(void_rmc.value(), {0}).error().code == ErrCode::NoFix);

    auto live = nmea::parse_sentence(
        line("$GPGGA,120000,2221.4140,N,09146.9920,E,1,08,0.9,12.0,M,0.0,M,,*49"));
    REQUIRE(live.ok());
    auto fix = nmea::to_geo_fix(live.value(), {1000});
    REQUIRE(fix.ok());
    CHECK(fix.value().lat == doctest::Approx(22.3569).epsilon(1e-9));
    CHECK(fix.value().lon == doctest::Approx(91.7832).epsilon(1e-9));
}

TEST_CASE("fix extraction flags unusable coordinate fields") {
    auto make_gga = [](const std::string& lat, const std::string& lat_h,
                       const std::string& lon, const std::string& lon_h) {
        return nmea::make_sentence("GP", "GGA",
                                   {"120000", lat, lat_h, lon, lon_h, "1", "08",
                                    "0.9", "12.0", "M", "0.0", "M", "", ""});
    };
    // Empty coordinates despite a claimed fix.
    CHECK(nmea::to_geo_fix(make_gga("", "", "09147.0000", "E"), {0}).error().code ==
          ErrCode::FieldError);
    // Minutes must stay below sixty.
    CHECK(nmea::to_geo_fix(make_gga("2360.0000", "N", "09147.0000", "E"), {0})
              .error()
              .code == ErrCode::FieldError);
    // Unknown hemisphere letter.
    CHECK(nmea::to_geo_fix(make_gga("2323.5000", "Q", "09147.0000", "E"), {0})
              .error()
              .code == ErrCode::FieldError);
    // 91 degrees of latitude.
    CHECK(nmea::to_geo_fix(make_gga("9130.0000", "N", "09147.0000", "E"), {0})
              .error()
              .code == ErrCode::FieldError);
    // Non-digit noise inside the number.
    CHECK(nmea::to_geo_fix(make_gga("23a3.5000", "N", "09147.0000", "E"), {0})
              .error()
              .code == ErrCode::FieldError);
    // Too few fields to even hold coordinates.
    auto stub = nmea::make_sentence("GP", "GGA", {"120000", "1"});
    CHECK(nmea::to_geo_fix(stub, {0}).error().code == ErrCode::FieldError);
}

TEST_CASE("serialize emits uppercase two-digit checksums and CRLF") {
    auto s = nmea::make_sentence("GP", "GGA", {"x"});
    // Payload "GPGGA,x" folds to 0x02; the hex must keep its leading zero.
    CHECK(nmea::serialize(s) == "$GPGGA,x*02\r\n");

    auto parsed = nmea::parse_sentence(line(nmea::serialize(s)));
    REQUIRE(parsed.ok());
    CHECK(parsed.value() == s);
}

TEST_CASE("round-trip and corruption properties hold over random sentences") {
    std::mt19937 engine(20260819);
    for (int i = 0; i < 200; ++i) {
        auto gen = oracles::random_fix_sentence(engine);
        CAPTURE(gen.raw);

        auto parsed = nmea::parse_sentence(line(gen.raw));
        REQUIRE(parsed.ok());
        CHECK(nmea::serialize(parsed.value()) == gen.raw);

        // Flip one random payload bit; the sentence must not parse.
        std::string corrupted = gen.raw;
        std::size_t star = corrupted.rfind('*');
        std::size_t index = 1 + engine() % (star - 1);
        corrupted[index] =
            static_cast<char>(corrupted[index] ^ (1 << (engine() % 7)));
        auto rejected = nmea::parse_sentence(line(corrupted));
        CHECK_FALSE(rejected.ok());

        // Conversion agrees with exact integer arithmetic.
        auto sentence = parsed.value();
        auto fix = nmea::to_geo_fix(sentence, {0});
        if (gen.has_fix) {
            REQUIRE(fix.ok());
            CHECK(std::fabs(static_cast<long double>(fix.value().lat) - gen.lat) < 1e-7L);
            CHECK(std::fabs(static_cast<long double>(fix.value().lon) - gen.lon) < 1e-7L);
        } else {
            CHECK(fix.error().code == ErrCode::NoFix);
        }
    }
}
