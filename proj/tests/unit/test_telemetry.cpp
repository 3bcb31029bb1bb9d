#include "doctest.h"

#include <cmath>

#include "crashlink/telemetry.hpp"

using namespace crashlink;

TEST_CASE("accel samples validate against the converter range") {
    AccelSample ok{{100}, 0, 512, 1023};
    CHECK(validate(ok).ok());

    AccelSample high = ok;
    high.y = 1024;
    auto r = validate(high);
    REQUIRE_FALSE(r.ok());
    CHECK(r.error().code == ErrCode::RangeError);

    AccelSample negative = ok;
    negative.x = -1;
    CHECK(validate(negative).error().code == ErrCode::RangeError);

    AccelSample before_start = ok;
    before_start.t.millis = -5;
    CHECK(validate(before_start).error().code == ErrCode::RangeError);
}

TEST_CASE("validation returns the value unchanged") {
    AccelSample sample{{250}, 17, 900, 333};
    auto once = validate(sample);
    REQUIRE(once.ok());
    CHECK(once.value() == sample);
    // Idempotent: validating the validated value changes nothing.
    auto twice = validate(once.value());
    REQUIRE(twice.ok());
    CHECK(twice.value() == sample);
}

TEST_CASE("ultrasonic range must be non-negative and finite") {
    CHECK(validate(UltrasonicSample{{0}, SensorPosition::Rear, 0.0}).ok());
    CHECK(validate(UltrasonicSample{{0}, SensorPosition::Front, 400.5}).ok());
    CHECK(validate(UltrasonicSample{{0}, SensorPosition::Front, -0.1}).error().code ==
          ErrCode::RangeError);
    double nan = std::nan("");
    CHECK(validate(UltrasonicSample{{0}, SensorPosition::Front, nan}).error().code ==
          ErrCode::RangeError);
}

TEST_CASE("nmea lines must start with '$' and keep CR/LF at the tail only") {
    CHECK(validate(NmeaLine{{0}, "$GPGGA,1*00"}).ok());
    CHECK(validate(NmeaLine{{0}, "$GPGGA,1*00\r\n"}).ok());
    CHECK(validate(NmeaLine{{0}, ""}).error().code == ErrCode::FormatError);
    CHECK(validate(NmeaLine{{0}, "GPGGA,1*00"}).error().code == ErrCode::FormatError);
    CHECK(validate(NmeaLine{{0}, "$GP\r\nGGA"}).error().code == ErrCode::FormatError);
}

TEST_CASE("phone numbers are plus and eight to fifteen digits") {
    CHECK(valid_phone("+88017123456"));        // 11 digits
    CHECK(valid_phone("+12345678"));           // 8, shortest allowed
    CHECK(valid_phone("+123456789012345"));    // 15, longest allowed
    CHECK_FALSE(valid_phone("+1234567"));      // 7, too short
    CHECK_FALSE(valid_phone("+1234567890123456"));  // 16, too long
    CHECK_FALSE(valid_phone("8801712345678"));      // missing plus
    CHECK_FALSE(valid_phone("+880171234567a"));
    CHECK_FALSE(valid_phone("+880 171234567"));
    CHECK_FALSE(valid_phone(""));
}

TEST_CASE("responder validation checks phone and position") {
    Responder good{"h1", ResponderKind::Hospital, "General Hospital",
                   "+8801712345601", {23.81, 90.41}};
    CHECK(validate(good).ok());

    Responder bad_phone = good;
    bad_phone.phone = "01712345601";
    CHECK(validate(bad_phone).error().code == ErrCode::FormatError);

    Responder bad_lat = good;
    bad_lat.location.lat = 90.5;
    CHECK(validate(bad_lat).error().code == ErrCode::RangeError);

    Responder no_id = good;
    no_id.id.clear();
    CHECK(validate(no_id).error().code == ErrCode::FormatError);
}

TEST_CASE("sensor record validation dispatches to the sample validators") {
    SensorRecord ok = AccelSample{{10}, 1, 2, 3};
    CHECK(validate(ok).ok());
    SensorRecord bad = UltrasonicSample{{10}, SensorPosition::Front, -2.0};
    CHECK(validate(bad).error().code == ErrCode::RangeError);
    CHECK(record_time(ok) == Timestamp{10});
}
