#pragma once

#include <cstdint>
#include <memory>
#include <string>

#include "maskagent/policy.hpp"
#include "maskagent/remote.hpp"
#include "maskagent/segmenter.hpp"
#include "maskagent/sft.hpp"

namespace maskagent {

// Component specs as used on the command line:
//   segmenter: oracle | region_grow[:delta[:cap]] | empty | remote:<url>
//   policy:    expert | noisy:<sigma>:<flip> | remote:<url>
//   prm:       oracle | noisy:<sigma> | remote:<url>
// Remote specs share one client per URL within a call; `pool` sizes its
// connection pool.
std::shared_ptr<const Segmenter> make_segmenter(const std::string& spec, int pool = 1);
std::shared_ptr<const Policy> make_policy(const std::string& spec, std::uint64_t seed,
                                          const PromptConfig& prompt, int pool = 1);
std::shared_ptr<const Prm> make_prm(const std::string& spec, std::uint64_t seed, const PromptConfig& prompt,
                                    int pool = 1);

}  // namespace maskagent
