#ifndef FLOWCURV_CONTEXT_HPP
#define FLOWCURV_CONTEXT_HPP

#include <memory>
#include <string>
#include <vector>

#include "flowcurv/errors.hpp"

namespace flowcurv {

/// Ordered variable list shared by all polynomials of one ring.
/// Precedence for the monomial order is declaration order.
class VarContext {
  public:
    static constexpr int kMaxVars = 16;

    explicit VarContext(std::vector<std::string> names) : names_(std::move(names)) {
        if (names_.size() > kMaxVars)
            throw contract_error("too many variables (max " + std::to_string(kMaxVars) + ")");
        for (size_t i = 0; i < names_.size(); ++i)
            for (size_t j = i + 1; j < names_.size(); ++j)
                if (names_[i] == names_[j])
                    throw contract_error("duplicate variable '" + names_[i] + "' in context");
    }

    int size() const { return static_cast<int>(names_.size()); }
    const std::string& name(int i) const { return names_[static_cast<size_t>(i)]; }
    const std::vector<std::string>& names() const { return names_; }

    int index_of(const std::string& name) const {
        for (size_t i = 0; i < names_.size(); ++i)
            if (names_[i] == name) return static_cast<int>(i);
        return -1;
    }
    bool has(const std::string& name) const { return index_of(name) >= 0; }

    friend bool operator==(const VarContext& a, const VarContext& b) { return a.names_ == b.names_; }

  private:
    std::vector<std::string> names_;
};

using ContextPtr = std::shared_ptr<const VarContext>;

inline ContextPtr make_context(std::vector<std::string> names) {
    return std::make_shared<const VarContext>(std::move(names));
}

inline bool same_context(const ContextPtr& a, const ContextPtr& b) {
    return a == b || (a && b && *a == *b);
}

} // namespace flowcurv

#endif
