#include "sllam/ext.hpp"

namespace sllam {

const std::vector<ExtRuleTag>& ext_rule_tags() {
  static const std::vector<ExtRuleTag> tags = {
      RuleTag::DiscardSucc,           RuleTag::DiscardZero,         RuleTag::CopySucc,
      RuleTag::CopyZero,              RuleTag::PromoteComonoidDiscard, RuleTag::PromoteComonoidCopy,
      RuleTag::DerelictPromote,       RuleTag::PromotePromote};
  return tags;
}

Typing infer_ext(const Basis& basis, const Term& t) {
  TypingOptions opts;
  opts.mode = TypingMode::Extended;
  return infer(basis, t, opts);
}

Term step_ext(const Term& t, const RedexSite& site) {
  if (!is_extension_rule(site.tag))
    throw InvalidSite(std::string(to_string(site.tag)) + " is not an extension rewrite");
  return step_at(t, site);
}

}  // namespace sllam
