#include "countsim/checkpoint.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace countsim {

namespace {

struct LayerRef {
    const char* name;
    std::vector<double>* values;
    std::vector<int> dims;
};

std::vector<LayerRef> layer_table(NetworkParams& p) {
    const NetworkShape& s = p.shape;
    return {
        {"conv_weights", &p.conv_weights, {s.conv_filters, s.kernel_size, s.kernel_size}},
        {"conv_bias", &p.conv_bias, {s.conv_filters}},
        {"dense3_weights", &p.dense3_weights, {s.hidden3_size, s.pool_flat_size()}},
        {"dense3_bias", &p.dense3_bias, {s.hidden3_size}},
        {"dense4_weights", &p.dense4_weights, {s.hidden4_size, s.concat_size()}},
        {"dense4_bias", &p.dense4_bias, {s.hidden4_size}},
        {"number_weights", &p.number_weights, {s.number_classes, s.hidden4_size}},
        {"number_bias", &p.number_bias, {s.number_classes}},
        {"gesture_weights", &p.gesture_weights, {s.gesture_joints, s.hidden4_size}},
        {"gesture_bias", &p.gesture_bias, {s.gesture_joints}},
    };
}

void put_f32_le(std::string& out, float v) {
    std::uint32_t bits;
    std::memcpy(&bits, &v, 4);
    out.push_back(static_cast<char>(bits & 0xff));
    out.push_back(static_cast<char>((bits >> 8) & 0xff));
    out.push_back(static_cast<char>((bits >> 16) & 0xff));
    out.push_back(static_cast<char>((bits >> 24) & 0xff));
}

float get_f32_le(const unsigned char* p) {
    const std::uint32_t bits = static_cast<std::uint32_t>(p[0]) |
                               (static_cast<std::uint32_t>(p[1]) << 8) |
                               (static_cast<std::uint32_t>(p[2]) << 16) |
                               (static_cast<std::uint32_t>(p[3]) << 24);
    float v;
    std::memcpy(&v, &bits, 4);
    return v;
}

} // namespace

void save_checkpoint(const NetworkParams& params, const std::filesystem::path& path) {
    auto table = layer_table(const_cast<NetworkParams&>(params));
    std::ostringstream manifest;
    const NetworkShape& s = params.shape;
    manifest << "countsim checkpoint 1\n";
    manifest << "shape " << s.image_height << " " << s.image_width << " " << s.conv_filters << " "
             << s.kernel_size << " " << s.hidden3_size << " " << s.hidden4_size << " "
             << s.number_classes << " " << s.gesture_joints << " " << s.trigger_size << "\n";
    std::string data;
    for (const LayerRef& layer : table) {
        manifest << "layer " << layer.name << " dims";
        std::size_t count = 1;
        for (int d : layer.dims) {
            manifest << " " << d;
            count *= static_cast<std::size_t>(d);
        }
        if (count != layer.values->size())
            throw std::logic_error("checkpoint: layer size inconsistent with shape");
        manifest << " offset " << data.size() << "\n";
        for (double v : *layer.values) put_f32_le(data, static_cast<float>(v));
    }
    manifest << "data " << data.size() << "\n";

    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open checkpoint for writing: " + path.string());
    const std::string header = manifest.str();
    out.write(header.data(), static_cast<std::streamsize>(header.size()));
    out.write(data.data(), static_cast<std::streamsize>(data.size()));
    if (!out) throw std::runtime_error("checkpoint write failed: " + path.string());
}

NetworkParams load_checkpoint(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open checkpoint: " + path.string());

    std::string line;
    if (!std::getline(in, line) || line != "countsim checkpoint 1")
        throw std::runtime_error("bad checkpoint magic in " + path.string());
    if (!std::getline(in, line)) throw std::runtime_error("truncated checkpoint manifest");
    NetworkShape shape;
    {
        std::istringstream ss(line);
        std::string word;
        ss >> word >> shape.image_height >> shape.image_width >> shape.conv_filters >>
            shape.kernel_size >> shape.hidden3_size >> shape.hidden4_size >>
            shape.number_classes >> shape.gesture_joints >> shape.trigger_size;
        if (word != "shape" || !ss) throw std::runtime_error("bad checkpoint shape line");
    }

    NetworkParams params = NetworkParams::zeros(shape);
    auto table = layer_table(params);

    struct Expected {
        std::vector<double>* values;
        std::size_t offset;
    };
    std::vector<Expected> order;
    std::size_t data_size = 0;
    std::size_t table_idx = 0;
    while (std::getline(in, line)) {
        std::istringstream ss(line);
        std::string kind;
        ss >> kind;
        if (kind == "data") {
            ss >> data_size;
            if (!ss) throw std::runtime_error("bad checkpoint data line");
            break;
        }
        if (kind != "layer") throw std::runtime_error("unexpected checkpoint manifest line: " + line);
        std::string name, word;
        ss >> name >> word;
        if (word != "dims") throw std::runtime_error("bad checkpoint layer line: " + line);
        if (table_idx >= table.size()) throw std::runtime_error("too many checkpoint layers");
        const LayerRef& expect = table[table_idx];
        if (name != expect.name)
            throw std::runtime_error("checkpoint layer order mismatch: got " + name);
        std::vector<int> dims;
        std::size_t offset = 0;
        while (ss >> word) {
            if (word == "offset") {
                ss >> offset;
                break;
            }
            dims.push_back(std::stoi(word));
        }
        if (dims != expect.dims)
            throw std::runtime_error("checkpoint layer dims mismatch for " + name);
        order.push_back({expect.values, offset});
        ++table_idx;
    }
    if (table_idx != table.size()) throw std::runtime_error("checkpoint missing layers");

    std::vector<unsigned char> data(data_size);
    in.read(reinterpret_cast<char*>(data.data()), static_cast<std::streamsize>(data_size));
    if (in.gcount() != static_cast<std::streamsize>(data_size))
        throw std::runtime_error("checkpoint data truncated: " + path.string());

    for (std::size_t i = 0; i < order.size(); ++i) {
        std::vector<double>& values = *order[i].values;
        const std::size_t need = order[i].offset + values.size() * 4;
        if (need > data_size) throw std::runtime_error("checkpoint offsets exceed data section");
        const unsigned char* p = data.data() + order[i].offset;
        for (std::size_t j = 0; j < values.size(); ++j, p += 4)
            values[j] = static_cast<double>(get_f32_le(p));
    }
    if (!params.all_finite())
        throw std::runtime_error("checkpoint contains non-finite values: " + path.string());
    return params;
}

} // namespace countsim
