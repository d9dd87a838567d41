#include "ddp/prompts.hpp"

#include "ddp/errors.hpp"

namespace ddp::assets {

const std::string& prompt(const std::string& stem) {
  const auto& table = embedded_prompts();
  auto it = table.find(stem);
  if (it == table.end()) throw ConfigError("missing prompt asset '" + stem + "'");
  return it->second;
}

std::string render(const std::string& tmpl, const std::map<std::string, std::string>& vars) {
  std::string body = tmpl;
  // Assets open with a "#version N" line that is not part of the prompt.
  if (body.rfind("#version", 0) == 0) {
    const auto nl = body.find('\n');
    body = nl == std::string::npos ? std::string() : body.substr(nl + 1);
  }
  while (!body.empty() && (body.back() == '\n' || body.back() == ' ')) body.pop_back();

  std::string out;
  out.reserve(body.size());
  std::size_t pos = 0;
  while (pos < body.size()) {
    const auto open = body.find("{{", pos);
    if (open == std::string::npos) break;
    const auto close = body.find("}}", open + 2);
    if (close == std::string::npos) break;
    out.append(body, pos, open - pos);
    const std::string name = body.substr(open + 2, close - open - 2);
    if (auto it = vars.find(name); it != vars.end()) {
      out += it->second;
    } else {
      out.append(body, open, close + 2 - open);
    }
    pos = close + 2;
  }
  out.append(body, pos, std::string::npos);
  return out;
}

}  // namespace ddp::assets
