#include "matkit/rosta.hpp"

#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "matkit/core/ops.hpp"

namespace matkit::rosta {

namespace {

int effective_kernel(int k) {
    if (k < 1) throw std::invalid_argument("kernel must be >= 1");
    return k % 2 == 0 ? k + 1 : k;
}

BinaryMask support_mask(const AlphaMatte& alpha, float delta) {
    BinaryMask m(alpha.width, alpha.height);
    for (size_t i = 0; i < alpha.data.size(); ++i) m.data[i] = alpha.data[i] > delta ? 1 : 0;
    return m;
}

BinaryMask solid_mask(const AlphaMatte& alpha, float delta) {
    BinaryMask m(alpha.width, alpha.height);
    for (size_t i = 0; i < alpha.data.size(); ++i) {
        m.data[i] = alpha.data[i] >= 1.0f - delta ? 1 : 0;
    }
    return m;
}

RostaMask init_mask(Kind kind, const AlphaMatte& alpha, int kernel) {
    RostaMask r;
    r.kind = kind;
    r.kernel = kernel;
    r.width = alpha.width;
    r.height = alpha.height;
    r.labels.assign(static_cast<size_t>(alpha.width) * alpha.height, 0);
    return r;
}

}  // namespace

std::string kind_name(Kind kind) {
    switch (kind) {
        case Kind::TT: return "tt";
        case Kind::FT: return "ft";
        case Kind::BT: return "bt";
    }
    throw std::logic_error("bad kind");
}

Kind kind_from_name(const std::string& name) {
    if (name == "tt" || name == "TT") return Kind::TT;
    if (name == "ft" || name == "FT") return Kind::FT;
    if (name == "bt" || name == "BT") return Kind::BT;
    throw std::invalid_argument("unknown representation kind: " + name);
}

RostaMask make_tt(const AlphaMatte& alpha, int k) {
    core::require_unit_range(alpha, "alpha");
    const int kernel = effective_kernel(k);
    BinaryMask fg = core::erode(solid_mask(alpha, kDelta), kernel);
    BinaryMask bg = core::logical_not(core::dilate(support_mask(alpha, kDelta), kernel));
    RostaMask r = init_mask(Kind::TT, alpha, kernel);
    for (size_t i = 0; i < r.labels.size(); ++i) {
        r.labels[i] = fg.data[i] ? 2 : (bg.data[i] ? 0 : 1);
    }
    return r;
}

RostaMask make_ft(const AlphaMatte& alpha, int k) {
    core::require_unit_range(alpha, "alpha");
    const int kernel = effective_kernel(k);
    BinaryMask support = support_mask(alpha, kDelta);
    BinaryMask fg = core::erode(support, kernel);
    RostaMask r = init_mask(Kind::FT, alpha, kernel);
    for (size_t i = 0; i < r.labels.size(); ++i) {
        r.labels[i] = fg.data[i] ? 2 : (support.data[i] ? 1 : 0);
    }
    return r;
}

RostaMask make_bt(const AlphaMatte& alpha, int k) {
    core::require_unit_range(alpha, "alpha");
    const int kernel = effective_kernel(k);
    BinaryMask support = support_mask(alpha, kDelta);
    BinaryMask notbg = core::dilate(support, kernel);
    RostaMask r = init_mask(Kind::BT, alpha, kernel);
    for (size_t i = 0; i < r.labels.size(); ++i) {
        r.labels[i] = notbg.data[i] ? (support.data[i] ? 2 : 1) : 0;
    }
    return r;
}

RostaMask make(Kind kind, const AlphaMatte& alpha, int k) {
    switch (kind) {
        case Kind::TT: return make_tt(alpha, k);
        case Kind::FT: return make_ft(alpha, k);
        case Kind::BT: return make_bt(alpha, k);
    }
    throw std::logic_error("bad kind");
}

BinaryMask transition_weight(const RostaMask& rosta) { return label_mask(rosta, 1); }

BinaryMask label_mask(const RostaMask& rosta, uint8_t label) {
    BinaryMask m(rosta.width, rosta.height);
    for (size_t i = 0; i < rosta.labels.size(); ++i) {
        m.data[i] = rosta.labels[i] == label ? 1 : 0;
    }
    return m;
}

core::Gray8 to_trimap(const RostaMask& rosta) {
    core::Gray8 g(rosta.width, rosta.height);
    static const uint8_t kValues[3] = {0, 128, 255};
    for (size_t i = 0; i < rosta.labels.size(); ++i) g.data[i] = kValues[rosta.labels[i]];
    return g;
}

RostaMask from_trimap(const core::Gray8& trimap, Kind kind, int kernel, float delta) {
    RostaMask r;
    r.kind = kind;
    r.kernel = kernel;
    r.delta = delta;
    r.width = trimap.width;
    r.height = trimap.height;
    r.labels.resize(trimap.data.size());
    for (size_t i = 0; i < trimap.data.size(); ++i) {
        switch (trimap.data[i]) {
            case 0: r.labels[i] = 0; break;
            case 128: r.labels[i] = 1; break;
            case 255: r.labels[i] = 2; break;
            default:
                throw std::runtime_error("trimap contains a value other than 0/128/255");
        }
    }
    return r;
}

void save_rosta(const std::string& path, const RostaMask& rosta) {
    core::save_gray8(path, to_trimap(rosta));
    nlohmann::ordered_json j;
    j["kind"] = kind_name(rosta.kind);
    j["kernel"] = rosta.kernel;
    j["delta"] = rosta.delta;
    std::ofstream out(path + ".json");
    if (!out) throw std::runtime_error("cannot write sidecar: " + path + ".json");
    out << j.dump(2) << "\n";
}

RostaMask load_rosta(const std::string& path) {
    std::ifstream in(path + ".json");
    if (!in) throw std::runtime_error("missing sidecar: " + path + ".json");
    nlohmann::json j = nlohmann::json::parse(in);
    return from_trimap(core::load_gray8(path), kind_from_name(j.at("kind").get<std::string>()),
                       j.at("kernel").get<int>(), j.at("delta").get<float>());
}

}  // namespace matkit::rosta
