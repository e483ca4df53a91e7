#include "maskagent/factory.hpp"

#include <string_view>
#include <vector>

#include "maskagent/error.hpp"

namespace maskagent {

namespace {

std::vector<std::string> split(const std::string& spec) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        const auto pos = spec.find(':', start);
        parts.push_back(spec.substr(start, pos - start));
        if (pos == std::string::npos) break;
        start = pos + 1;
    }
    return parts;
}

bool remote_spec(const std::string& spec, std::string& url) {
    constexpr std::string_view prefix = "remote:";
    if (spec.rfind(prefix, 0) != 0) return false;
    url = spec.substr(prefix.size());
    if (url.empty()) throw InvalidArgument("remote spec needs a URL: " + spec);
    return true;
}

double number(const std::string& text, const std::string& spec) {
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::logic_error&) {
        throw InvalidArgument("bad number '" + text + "' in spec " + spec);
    }
}

std::shared_ptr<const RemoteClient> client(const std::string& url, int pool) {
    return std::make_shared<const RemoteClient>(RemoteEndpoint{url}, pool);
}

}  // namespace

std::shared_ptr<const Segmenter> make_segmenter(const std::string& spec, int pool) {
    std::string url;
    if (remote_spec(spec, url)) return std::make_shared<RemoteSegmenter>(client(url, pool));
    const auto parts = split(spec);
    if (parts[0] == "oracle" && parts.size() <= 2) {
        return std::make_shared<OracleSegmenter>(parts.size() == 2 ? static_cast<int>(number(parts[1], spec)) : 2);
    }
    if (parts[0] == "region_grow" && parts.size() <= 3) {
        const int delta = parts.size() >= 2 ? static_cast<int>(number(parts[1], spec)) : 24;
        const int cap = parts.size() >= 3 ? static_cast<int>(number(parts[2], spec)) : 2048;
        return std::make_shared<RegionGrowSegmenter>(delta, cap);
    }
    if (spec == "empty") return std::make_shared<EmptySegmenter>();
    throw InvalidArgument("unknown segmenter spec: " + spec);
}

std::shared_ptr<const Policy> make_policy(const std::string& spec, std::uint64_t seed, const PromptConfig& prompt,
                                          int pool) {
    std::string url;
    if (remote_spec(spec, url)) return std::make_shared<RemotePolicy>(client(url, pool), prompt);
    const auto parts = split(spec);
    if (spec == "expert") return std::make_shared<ExpertPolicy>();
    if (parts[0] == "noisy" && parts.size() <= 3) {
        NoiseConfig noise;
        noise.sigma = parts.size() >= 2 ? number(parts[1], spec) : 0.1;
        noise.flip_prob = parts.size() >= 3 ? number(parts[2], spec) : 0.2;
        noise.seed = seed;
        return std::make_shared<NoisyExpertPolicy>(noise);
    }
    throw InvalidArgument("unknown policy spec: " + spec);
}

std::shared_ptr<const Prm> make_prm(const std::string& spec, std::uint64_t seed, const PromptConfig& prompt,
                                    int pool) {
    std::string url;
    if (remote_spec(spec, url)) return std::make_shared<RemotePrm>(client(url, pool), prompt);
    const auto parts = split(spec);
    if (spec == "oracle") return std::make_shared<OraclePrm>();
    if (parts[0] == "noisy" && parts.size() == 2) return std::make_shared<NoisyPrm>(number(parts[1], spec), seed);
    throw InvalidArgument("unknown PRM spec: " + spec);
}

}  // namespace maskagent
