#ifndef ZSP_CONFIG_H_
#define ZSP_CONFIG_H_

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "zsp/experiment.h"

namespace zsp::pipeline {

// Ordered key/value pairs. Later assignments to a key replace earlier ones.
using KeyValues = std::map<std::string, std::string>;

// One `key = value` per line; `#` starts a comment; blank lines are skipped.
// Throws FormatError with the line of a malformed entry.
KeyValues parseKeyValues(std::string_view text, const std::string& source);
KeyValues loadKeyValues(const std::string& path);

// Parses "key=value" overrides, as given on a command line.
KeyValues parseOverrides(const std::vector<std::string>& items);

// Experiment and model settings addressable by key. Unknown keys and
// unparseable values throw ConfigError naming the key.
//
//   mode target sources seeds variants
//   beam max_steps max_decode require_nonempty
//   mapper.{embed,hidden,dropout,init_scale,epochs,lr,l2,optimizer,clip}
//   aligner.{embed,hidden,dropout,init_scale,epochs,lr,l2,optimizer,clip}
//   lexical.{embed,hidden,dropout,init_scale,epochs,lr,l2,optimizer,clip}
//   teacher.{iterations,p0,tension}
//
// List values are comma-separated. `data` and `domains` are accepted and left
// to the caller.
void applyConfig(ExperimentConfig& config, const KeyValues& values);

// The keys applyConfig understands, sorted.
std::vector<std::string> configKeys();

}  // namespace zsp::pipeline

#endif  // ZSP_CONFIG_H_
