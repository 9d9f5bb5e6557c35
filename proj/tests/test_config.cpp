#include "doctest.h"

#include "countsim/config.hpp"

using namespace countsim;

TEST_CASE("defaults are valid and match the published protocol") {
    RunConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    CHECK(cfg.gesture_pre_iterations == 2000);
    CHECK(cfg.recitation_pre_iterations == 1000);
    CHECK(cfg.study1_iterations == 2000);
    CHECK(cfg.study2_iterations == 2000);
    CHECK(cfg.study3_iterations == 1050);
    CHECK(cfg.gesture_pre_gesture_lr == 0.004);
    CHECK(cfg.recitation_pre_number_lr == 0.002);
    CHECK(cfg.recitation_pre_gesture_lr == 0.001);
    CHECK(cfg.main_number_lr == 0.001);
    CHECK(cfg.main_gesture_lr == 0.002);
    CHECK(cfg.eval_every == 50);
    CHECK(cfg.test_batches == 50);
    CHECK(cfg.image_height == 40);
    CHECK(cfg.image_width == 134);
}

TEST_CASE("serialize/parse round-trip is stable") {
    RunConfig cfg;
    cfg.seeds = {4, 9};
    cfg.study = 2;
    cfg.image_width = 68;
    cfg.image_height = 14;
    cfg.ball_radius = 2;
    cfg.momentum = 0.9;
    cfg.schedule_end = "alt";
    const RunConfig back = RunConfig::from_string(cfg.serialize());
    CHECK(back.serialize() == cfg.serialize());
    CHECK(back.seeds == cfg.seeds);
    CHECK(back.schedule().end.point == doctest::Approx(0.9));
}

TEST_CASE("unknown keys and malformed values are rejected by name") {
    CHECK_THROWS_WITH_AS(RunConfig::from_string("bogus_key = 1\n"),
                         doctest::Contains("unknown key 'bogus_key'"), ConfigError);
    CHECK_THROWS_AS(RunConfig::from_string("jobs = many\n"), ConfigError);
    CHECK_THROWS_AS(RunConfig::from_string("seeds = 1,x\n"), ConfigError);
    CHECK_THROWS_AS(RunConfig::from_string("this line has no equals\n"), ConfigError);
    CHECK_NOTHROW(RunConfig::from_string("# comment\n\nseeds = 3\n"));
}

TEST_CASE("validation enforces the module invariants") {
    auto expect_invalid = [](const std::string& text) {
        RunConfig cfg = RunConfig::from_string(text);
        CHECK_THROWS_AS(cfg.validate(), ConfigError);
    };
    expect_invalid("image_width = 10\n");                // cells would not fit
    expect_invalid("ball_radius = 7\n");                 // discs overlap
    expect_invalid("study = 4\n");
    expect_invalid("seeds = \n");
    expect_invalid("eval_every = 0\n");
    expect_invalid("momentum = 1.0\n");
    expect_invalid("batch_gradient = median\n");
    expect_invalid("schedule_end = maybe\n");
    expect_invalid("hold_gesture = wiggle\n");
    expect_invalid("posture_spans = 0,0,0,0,0,0,0\n");   // postures collapse
    expect_invalid("schedule_end_probs = 0.5,0.5,0.5\n");
    expect_invalid("main_number_lr = -1\n");
}

TEST_CASE("derived accessors") {
    RunConfig cfg;
    CHECK(cfg.geometry().image_width == 134);
    CHECK(cfg.study_iterations(3) == 1050);
    CHECK(cfg.hold_policy() == HoldPolicy::HoldLast);
    cfg.hold_gesture = "base";
    CHECK(cfg.hold_policy() == HoldPolicy::ReturnToBase);
    cfg.schedule_end = "alt";
    CHECK(cfg.schedule().end.puppet == doctest::Approx(0.0));
    // Explicit endpoint probabilities override the named endpoint.
    RunConfig over = RunConfig::from_string("schedule_end_probs = 0.2,0.7,0.1\n");
    CHECK(over.schedule().end.point == doctest::Approx(0.7));
    CHECK_NOTHROW(over.validate());
}
