#pragma once

#include <map>
#include <string>

namespace ddp::assets {

/// assets/prompts/*.txt compiled into the binary, keyed by file stem.
const std::map<std::string, std::string>& embedded_prompts();

/// The embedded asset named `stem`; throws ConfigError if absent.
const std::string& prompt(const std::string& stem);

/// Replaces every "{{name}}" with vars[name]; unknown placeholders stay as-is.
std::string render(const std::string& tmpl, const std::map<std::string, std::string>& vars);

}  // namespace ddp::assets
