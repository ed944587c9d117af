#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>

#include "stegograph/pipeline.hpp"
#include "test_support.hpp"

using namespace stegograph;

namespace {

std::vector<RgbImage> random_covers(std::mt19937_64& rng, int n, std::uint32_t lo,
                                    std::uint32_t hi) {
    std::uniform_int_distribution<std::uint32_t> dim(lo, hi);
    std::vector<RgbImage> covers;
    for (int i = 0; i < n; ++i)
        covers.push_back(testsupport::random_image(rng, dim(rng), dim(rng)));
    return covers;
}

} // namespace

TEST_CASE("plan puts 12 chunks of a 6000-byte payload on one 100x100 cover") {
    std::mt19937_64 rng(1);
    std::vector<RgbImage> covers = {testsupport::random_image(rng, 100, 100)};
    // 100*100*3*2 = 60,000 bits = 7,500 bytes of capacity at k=2
    CapacityPlan p = plan(covers, {6000}, 512, 2);
    REQUIRE(p.covers.size() == 1);
    CHECK(p.covers[0].chunks.size() == 12);
    CHECK(p.covers[0].capacity_bits == 60'000);
    CHECK(p.covers[0].planned_segment_bytes <= 7'500);
    CHECK(p.total_payload_bytes == 6000);
    CHECK(p.utilization <= 1.0);

    // trial serialization oracle: build the real segment and check the fit
    RgbImage payload = reshape(
        FlatChannels{testsupport::random_bytes(rng, 6000), 50, 40}, 50, 40);
    auto stegos = encode({payload}, covers, 512, 2, TransformSpec::identity());
    REQUIRE(stegos.size() == 1);
    ParsedSegment seg = parse_segment(extract(stegos[0], 7'500, 0, 2));
    CHECK(seg.chunks.size() == 12);
    CHECK(seg.segment_bytes <= 7'500);
    CHECK(seg.segment_bytes <= p.covers[0].planned_segment_bytes);
}

TEST_CASE("plan fails with numbers when the payload cannot fit") {
    std::mt19937_64 rng(2);
    std::vector<RgbImage> covers = {testsupport::random_image(rng, 10, 10)};
    try {
        plan(covers, {100'000}, 512, 2);
        FAIL("expected CapacityError");
    } catch (const CapacityError& e) {
        CHECK(e.required_bits > e.available_bits);
        CHECK(e.available_bits == 600);
    }
}

TEST_CASE("plan rejects covers too small for even an empty segment") {
    std::mt19937_64 rng(3);
    std::vector<RgbImage> covers = {testsupport::random_image(rng, 100, 100),
                                    testsupport::random_image(rng, 2, 2)};
    CHECK_THROWS_AS(plan(covers, {100}, 512, 2), CapacityError);
}

TEST_CASE("encode then decode returns payloads bit-exactly") {
    std::mt19937_64 rng(4);
    std::vector<RgbImage> payloads = {testsupport::random_image(rng, 60, 41),
                                      testsupport::random_image(rng, 33, 52)};
    std::vector<RgbImage> covers = random_covers(rng, 8, 40, 90);
    auto stegos = encode(payloads, covers, 512, 2, TransformSpec::identity());
    REQUIRE(stegos.size() == covers.size());
    for (std::size_t i = 0; i < covers.size(); ++i) {
        CHECK(stegos[i].width == covers[i].width);
        CHECK(stegos[i].height == covers[i].height);
    }
    DecodeResult out = decode(stegos, 2, TransformSpec::identity());
    REQUIRE(out.payloads.size() == 2);
    CHECK(out.payloads[0] == payloads[0]);
    CHECK(out.payloads[1] == payloads[1]);
    CHECK(out.warnings.empty());
}

TEST_CASE("round trip holds across k and chunk size combinations") {
    std::mt19937_64 rng(5);
    for (int k : {1, 2, 3}) {
        for (std::uint64_t cs : {64ull, 512ull, 4096ull}) {
            std::vector<RgbImage> payloads = {testsupport::random_image(rng, 20, 20)};
            std::vector<RgbImage> covers = random_covers(rng, 3, 60, 90);
            auto stegos = encode(payloads, covers, cs, k, TransformSpec::identity());
            DecodeResult out = decode(stegos, k, TransformSpec::identity());
            REQUIRE(out.payloads.size() == 1);
            REQUIRE(out.payloads[0] == payloads[0]);

            // distortion bound per slot
            for (std::size_t i = 0; i < covers.size(); ++i)
                for (std::uint64_t b = 0; b < covers[i].byte_count(); ++b)
                    REQUIRE(std::abs(int(stegos[i].data[b]) -
                                     int(covers[i].data[b])) <= (1 << k) - 1);
        }
    }
}

TEST_CASE("covers after the spill boundary carry empty-directory segments") {
    std::mt19937_64 rng(6);
    std::vector<RgbImage> payloads = {testsupport::random_image(rng, 10, 10)};
    std::vector<RgbImage> covers = random_covers(rng, 4, 100, 120);
    auto stegos = encode(payloads, covers, 512, 2, TransformSpec::identity());
    int empty = 0;
    for (std::size_t i = 0; i < stegos.size(); ++i) {
        auto seg = parse_segment(
            extract(stegos[i], capacity_bits(stegos[i], 2) / 8, 0, 2));
        CHECK(seg.manifest.cover_index == i);
        CHECK(seg.manifest.num_cover_images == 4);
        if (seg.chunks.empty()) ++empty;
    }
    CHECK(empty == 3); // cover 0 alone suffices for a 300-byte payload
    // and decode still works off the full set
    CHECK(decode(stegos, 2, TransformSpec::identity()).payloads[0] == payloads[0]);
}

TEST_CASE("xor transform at both ends matches the identity result") {
    std::mt19937_64 rng(7);
    std::vector<RgbImage> payloads = {testsupport::random_image(rng, 40, 40)};
    std::vector<RgbImage> covers = random_covers(rng, 2, 90, 120);
    const auto xort = TransformSpec::xor_keystream({'k', 'e', 'y'});
    auto stegos_id = encode(payloads, covers, 512, 2, TransformSpec::identity());
    auto stegos_xor = encode(payloads, covers, 512, 2, xort);
    CHECK(stegos_id != stegos_xor);
    CHECK(decode(stegos_xor, 2, xort).payloads[0] == payloads[0]);
    CHECK(decode(stegos_id, 2, TransformSpec::identity()).payloads[0] ==
          payloads[0]);
}

TEST_CASE("decoding is invariant under input order") {
    std::mt19937_64 rng(8);
    std::vector<RgbImage> payloads = {testsupport::random_image(rng, 50, 50),
                                      testsupport::random_image(rng, 20, 60)};
    std::vector<RgbImage> covers = random_covers(rng, 5, 60, 90);
    auto stegos = encode(payloads, covers, 256, 2, TransformSpec::identity());
    DecodeResult sorted = decode(stegos, 2, TransformSpec::identity());
    for (int trial = 0; trial < 5; ++trial) {
        std::shuffle(stegos.begin(), stegos.end(), rng);
        DecodeResult shuffled = decode(stegos, 2, TransformSpec::identity());
        REQUIRE(shuffled.payloads == sorted.payloads);
    }
}

TEST_CASE("withholding a chunk-carrying stego names the missing positions") {
    std::mt19937_64 rng(9);
    std::vector<RgbImage> payloads = {testsupport::random_image(rng, 60, 60)};
    std::vector<RgbImage> covers = random_covers(rng, 4, 80, 100);
    auto stegos = encode(payloads, covers, 512, 2, TransformSpec::identity());

    // find a cover that actually carries chunks and drop it
    std::size_t victim = stegos.size();
    std::vector<std::uint32_t> expected_missing;
    for (std::size_t i = 0; i < stegos.size(); ++i) {
        auto seg = parse_segment(
            extract(stegos[i], capacity_bits(stegos[i], 2) / 8, 0, 2));
        if (!seg.chunks.empty()) {
            victim = i;
            for (const Chunk& c : seg.chunks)
                expected_missing.push_back(c.graph_position);
            break;
        }
    }
    REQUIRE(victim < stegos.size());
    std::sort(expected_missing.begin(), expected_missing.end());
    stegos.erase(stegos.begin() + victim);
    try {
        decode(stegos, 2, TransformSpec::identity());
        FAIL("expected IncompletePayloadError");
    } catch (const IncompletePayloadError& e) {
        CHECK(e.payload_id == 0);
        CHECK(e.missing_positions == expected_missing);
        CHECK(e.expected_covers == 4);
    }
}

TEST_CASE("plain images are skipped with a warning; all-plain is an error") {
    std::mt19937_64 rng(10);
    std::vector<RgbImage> payloads = {testsupport::random_image(rng, 20, 20)};
    std::vector<RgbImage> covers = random_covers(rng, 2, 60, 80);
    auto stegos = encode(payloads, covers, 512, 2, TransformSpec::identity());

    RgbImage plain = testsupport::random_image(rng, 30, 30);
    // make sure the random image does not begin with the magic by accident
    plain.data[0] = 0;

    std::vector<RgbImage> mixed = {plain, stegos[0], stegos[1]};
    DecodeResult out = decode(mixed, 2, TransformSpec::identity());
    CHECK(out.payloads[0] == payloads[0]);
    REQUIRE(out.warnings.size() == 1);
    CHECK(out.warnings[0].find("input 0") != std::string::npos);

    CHECK_THROWS_AS(decode({plain}, 2, TransformSpec::identity()),
                    NoStegoFoundError);
}

TEST_CASE("stegos of different jobs cannot be mixed") {
    std::mt19937_64 rng(11);
    std::vector<RgbImage> covers = random_covers(rng, 2, 80, 100);
    auto job_a = encode({testsupport::random_image(rng, 30, 30)}, covers, 512, 2,
                        TransformSpec::identity());
    auto job_b = encode({testsupport::random_image(rng, 31, 31)}, covers, 512, 2,
                        TransformSpec::identity());
    CHECK_THROWS_AS(decode({job_a[0], job_b[1]}, 2, TransformSpec::identity()),
                    CorruptionError);
}

TEST_CASE("encode is deterministic") {
    std::mt19937_64 rng(12);
    std::vector<RgbImage> payloads = {testsupport::random_image(rng, 40, 30)};
    std::vector<RgbImage> covers = random_covers(rng, 3, 60, 90);
    auto a = encode(payloads, covers, 512, 2, TransformSpec::identity());
    auto b = encode(payloads, covers, 512, 2, TransformSpec::identity());
    CHECK(a == b);
}

TEST_CASE("encode validates its inputs") {
    std::mt19937_64 rng(13);
    std::vector<RgbImage> covers = random_covers(rng, 1, 50, 50);
    CHECK_THROWS_AS(encode({}, covers, 512, 2, TransformSpec::identity()),
                    ValidationError);
    CHECK_THROWS_AS(encode({covers[0]}, {}, 512, 2, TransformSpec::identity()),
                    ValidationError);
    CHECK_THROWS_AS(decode({}, 2, TransformSpec::identity()), ValidationError);
}

TEST_CASE("planned segment sizes never exceed cover capacity") {
    std::mt19937_64 rng(14);
    for (int trial = 0; trial < 20; ++trial) {
        std::uniform_int_distribution<int> n_pay(1, 3), n_cov(1, 6);
        std::vector<std::uint64_t> sizes;
        for (int i = n_pay(rng); i > 0; --i) {
            std::uniform_int_distribution<std::uint64_t> px(1, 2000);
            sizes.push_back(px(rng) * 3);
        }
        std::vector<RgbImage> covers = random_covers(rng, n_cov(rng), 60, 128);
        try {
            CapacityPlan p = plan(covers, sizes, 512, 2);
            std::uint64_t assigned = 0;
            for (std::size_t i = 0; i < p.covers.size(); ++i) {
                CHECK(p.covers[i].planned_segment_bytes * 8 <=
                      p.covers[i].capacity_bits);
                assigned += p.covers[i].chunks.size();
            }
            std::uint64_t expected = 0;
            for (auto s : sizes) expected += chunk_count_for(s, 512);
            CHECK(assigned == expected);
            CHECK(p.utilization <= 1.0);
            CHECK(p.total_overhead_bytes > 0);
        } catch (const CapacityError&) {
            // legitimately infeasible draw
        }
    }
}
