#include "doctest.h"

#include <fstream>
#include <sstream>

#include "countsim/checkpoint.hpp"

using namespace countsim;

namespace {

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

NetworkParams sample_params(std::uint64_t seed) {
    GridGeometry g = tiny_geometry();
    Rng rng(seed);
    return init_params(NetworkShape::for_geometry(g), rng);
}

} // namespace

TEST_CASE("checkpoint round-trips bit-exactly at the file level") {
    const auto dir = std::filesystem::temp_directory_path();
    const auto a = dir / "countsim_ckpt_a.bin";
    const auto b = dir / "countsim_ckpt_b.bin";

    const NetworkParams params = sample_params(123);
    save_checkpoint(params, a);
    const NetworkParams loaded = load_checkpoint(a);
    CHECK(loaded.shape == params.shape);
    save_checkpoint(loaded, b);
    CHECK(slurp(a) == slurp(b));

    // Loaded values are the float32 roundings of the originals.
    for (std::size_t i = 0; i < params.dense3_weights.size(); ++i)
        CHECK(loaded.dense3_weights[i] ==
              static_cast<double>(static_cast<float>(params.dense3_weights[i])));

    // Saving the loaded params again reproduces identical in-memory values.
    const NetworkParams twice = load_checkpoint(b);
    CHECK(twice == loaded);

    std::filesystem::remove(a);
    std::filesystem::remove(b);
}

TEST_CASE("checkpoint manifest is text with offsets into the data section") {
    const auto path = std::filesystem::temp_directory_path() / "countsim_ckpt_m.bin";
    save_checkpoint(sample_params(7), path);
    std::ifstream in(path, std::ios::binary);
    std::string line;
    std::getline(in, line);
    CHECK(line == "countsim checkpoint 1");
    std::getline(in, line);
    CHECK(line.starts_with("shape "));
    std::getline(in, line);
    CHECK(line.starts_with("layer conv_weights dims 7 3 3 offset 0"));
    std::filesystem::remove(path);
}

TEST_CASE("corrupted checkpoints are rejected") {
    const auto dir = std::filesystem::temp_directory_path();
    const auto path = dir / "countsim_ckpt_bad.bin";

    CHECK_THROWS(load_checkpoint(dir / "countsim_does_not_exist.bin"));

    {
        std::ofstream out(path, std::ios::binary);
        out << "not a checkpoint\n";
    }
    CHECK_THROWS(load_checkpoint(path));

    // Tampered layer dims.
    save_checkpoint(sample_params(9), path);
    std::string content = slurp(path);
    const auto pos = content.find("dims 7 3 3");
    content.replace(pos, 10, "dims 7 3 4");
    {
        std::ofstream out(path, std::ios::binary);
        out << content;
    }
    CHECK_THROWS(load_checkpoint(path));

    // Truncated data section.
    save_checkpoint(sample_params(9), path);
    content = slurp(path);
    content.resize(content.size() - 10);
    {
        std::ofstream out(path, std::ios::binary);
        out << content;
    }
    CHECK_THROWS(load_checkpoint(path));

    std::filesystem::remove(path);
}
