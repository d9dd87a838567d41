#include <sstream>

#include "ddp/prompts.hpp"
#include "ddp/taxonomy.hpp"

namespace ddp::taxonomy {

namespace {

std::string taxonomy_listing() {
  std::ostringstream os;
  for (Category c : {Category::kPhysicalAttributes, Category::kPerceptualPhenomena}) {
    os << "- " << category_key(c) << ": ";
    const auto& subs = subtasks_of(c);
    for (std::size_t i = 0; i < subs.size(); ++i) os << (i ? ", " : "") << subtask_key(subs[i]);
    os << '\n';
  }
  return os.str();
}

}  // namespace

Classification classify(const raster::Raster& base_image, std::string_view question,
                        gateway::Gateway& gw) {
  using gateway::ChatPart;
  using gateway::Role;

  gateway::ChatRequest req;
  req.add_text(Role::kSystem,
               assets::render(assets::prompt("classifier"), {{"taxonomy", taxonomy_listing()}}));
  req.add(Role::kUser,
          {ChatPart::text(assets::render(assets::prompt("classifier_user"),
                                         {{"question", std::string(question)}})),
           ChatPart::image(base_image)});

  Classification out{fallback_config(), true, 0, {}};
  for (int round = 0; round < 2; ++round) {
    gateway::Reply reply = gw.send(req);
    ++out.calls;
    out.replies.push_back(reply.text);
    if (auto parsed = parse_classification(reply.text)) {
      out.config = *parsed;
      out.fell_back = false;
      return out;
    }
    req.add_text(Role::kAssistant, reply.text);
    req.add_text(Role::kUser, assets::render(assets::prompt("classifier_reminder"), {}));
  }
  return out;
}

}  // namespace ddp::taxonomy
