// include/chainlab/chain.hpp: addition chains, admissible chain classes, validation.

#pragma once

#include "chainlab/natural.hpp"

#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace chainlab {

/// Strictly increasing sequence 1 = a_0 < a_1 < ... < a_r = target where every
/// a_k (k >= 1) is a sum of two (not necessarily distinct) earlier elements.
///
/// The type itself does not enforce the invariants so that malformed input can
/// be represented and rejected by validate_chain.
struct AdditionChain {
    std::vector<Natural> elements;

    AdditionChain() = default;
    explicit AdditionChain(std::vector<Natural> elems) : elements(std::move(elems)) {}
    AdditionChain(std::initializer_list<Natural> elems) : elements(elems) {}

    /// Number of steps, i.e. one less than the element count.
    std::size_t length() const { return elements.empty() ? 0 : elements.size() - 1; }
    const Natural& target() const { return elements.back(); }

    friend bool operator==(const AdditionChain&, const AdditionChain&) = default;
};

inline std::string to_string(const AdditionChain& chain) {
    std::string out = "(";
    for (std::size_t i = 0; i < chain.elements.size(); ++i) {
        if (i != 0) {
            out += ',';
        }
        out += chain.elements[i].str();
    }
    out += ')';
    return out;
}

enum class ClassTag { All, Star, Binary, Custom };

/// Decides whether `next` may follow `prefix` inside a chain of the class.
/// Only called for steps that already satisfy the addition property.
using StepPredicate = std::function<bool(std::span<const Natural> prefix, const Natural& next)>;

/// An admissible family of addition chains described by a per-step predicate.
///
/// The built-in classes are ALL (every addition chain), STAR (every step reuses
/// the immediately preceding element) and BINARY (only the left-to-right binary
/// method chain). Further classes can be registered with register_chain_class;
/// a registered class is the caller's promise that the family is admissible:
/// it contains a chain of length at most floor(log2 n) + nu(n) - 1 for every n
/// and extending any of its chains by a doubling stays in the family.
class ChainClass {
public:
    static const ChainClass& all() {
        static const ChainClass c(ClassTag::All, "all",
                                  [](std::span<const Natural>, const Natural&) { return true; });
        return c;
    }

    static const ChainClass& star() {
        static const ChainClass c(ClassTag::Star, "star",
                                  [](std::span<const Natural> prefix, const Natural& next) {
                                      const Natural diff = next - prefix.back();
                                      for (const auto& x : prefix) {
                                          if (x == diff) {
                                              return true;
                                          }
                                      }
                                      return false;
                                  });
        return c;
    }

    static const ChainClass& binary() {
        static const ChainClass c(ClassTag::Binary, "binary",
                                  [](std::span<const Natural> prefix, const Natural& next) {
                                      const Natural& last = prefix.back();
                                      if (next == 2 * last) {
                                          return true;
                                      }
                                      // "add one" is only legal directly after a doubling
                                      return prefix.size() >= 2 && next == last + 1 &&
                                             last == 2 * prefix[prefix.size() - 2];
                                  });
        return c;
    }

    static ChainClass custom(std::string name, StepPredicate predicate) {
        return ChainClass(ClassTag::Custom, std::move(name), std::move(predicate));
    }

    ClassTag tag() const { return tag_; }
    const std::string& name() const { return name_; }

    bool accepts_step(std::span<const Natural> prefix, const Natural& next) const {
        return (*predicate_)(prefix, next);
    }

    friend bool operator==(const ChainClass& a, const ChainClass& b) { return a.name_ == b.name_; }

private:
    ChainClass(ClassTag tag, std::string name, StepPredicate predicate)
        : tag_(tag), name_(std::move(name)),
          predicate_(std::make_shared<const StepPredicate>(std::move(predicate))) {}

    ClassTag tag_;
    std::string name_;
    std::shared_ptr<const StepPredicate> predicate_;
};

namespace detail {

struct ClassRegistry {
    std::mutex lock;
    std::map<std::string, ChainClass, std::less<>> classes{
        {"all", ChainClass::all()}, {"star", ChainClass::star()}, {"binary", ChainClass::binary()}};
};

inline ClassRegistry& class_registry() {
    static ClassRegistry registry;
    return registry;
}

}  // namespace detail

/// Registers a custom class under its name. Re-registering a name throws.
inline void register_chain_class(const ChainClass& cls) {
    auto& registry = detail::class_registry();
    std::scoped_lock guard(registry.lock);
    if (!registry.classes.emplace(cls.name(), cls).second) {
        throw std::invalid_argument("chain class already registered: " + cls.name());
    }
}

inline ChainClass chain_class_by_name(std::string_view name) {
    auto& registry = detail::class_registry();
    std::scoped_lock guard(registry.lock);
    auto it = registry.classes.find(name);
    if (it == registry.classes.end()) {
        throw std::invalid_argument("unknown chain class: " + std::string(name));
    }
    return it->second;
}

enum class ChainFault {
    None,
    Empty,
    NotStartingAtOne,
    NotIncreasing,
    NotAdditionStep,
    ClassViolation,
};

struct ValidationVerdict {
    ChainFault fault = ChainFault::None;
    std::optional<std::size_t> index;  // first offending position

    bool valid() const { return fault == ChainFault::None; }
    /// Structural faults break the addition-chain definition itself;
    /// ClassViolation marks a valid addition step the class does not allow.
    bool structural() const { return fault != ChainFault::None && fault != ChainFault::ClassViolation; }
};

inline const char* describe(ChainFault fault) {
    switch (fault) {
        case ChainFault::None: return "valid";
        case ChainFault::Empty: return "empty sequence";
        case ChainFault::NotStartingAtOne: return "does not start at 1";
        case ChainFault::NotIncreasing: return "not strictly increasing";
        case ChainFault::NotAdditionStep: return "element is not a sum of two earlier elements";
        case ChainFault::ClassViolation: return "step not permitted by chain class";
    }
    return "unknown";
}

namespace detail {

/// Two-pointer search over a sorted prefix for x + y == value.
inline bool is_pair_sum(std::span<const Natural> sorted, const Natural& value) {
    if (sorted.empty()) {
        return false;
    }
    std::size_t i = 0;
    std::size_t j = sorted.size() - 1;
    while (i <= j) {
        const Natural s = sorted[i] + sorted[j];
        if (s == value) {
            return true;
        }
        if (s < value) {
            ++i;
        } else {
            if (j == 0) {
                break;
            }
            --j;
        }
    }
    return false;
}

}  // namespace detail

inline ValidationVerdict validate_chain(const AdditionChain& chain, const ChainClass& cls) {
    const auto& a = chain.elements;
    if (a.empty()) {
        return {ChainFault::Empty, std::nullopt};
    }
    if (a[0] != 1) {
        return {ChainFault::NotStartingAtOne, 0};
    }
    for (std::size_t k = 1; k < a.size(); ++k) {
        if (a[k] <= a[k - 1]) {
            return {ChainFault::NotIncreasing, k};
        }
        const std::span<const Natural> prefix(a.data(), k);
        if (!detail::is_pair_sum(prefix, a[k])) {
            return {ChainFault::NotAdditionStep, k};
        }
        if (!cls.accepts_step(prefix, a[k])) {
            return {ChainFault::ClassViolation, k};
        }
    }
    return {};
}

/// Left-to-right binary method: double at every bit below the leading one and
/// add one at every set bit. Length is floor(log2 n) + nu(n) - 1.
inline AdditionChain binary_chain(const Natural& n) {
    detail::require_positive(n, "binary_chain");
    AdditionChain chain;
    chain.elements.emplace_back(1);
    Natural value = 1;
    for (int bit = static_cast<int>(floor_log2(n)) - 1; bit >= 0; --bit) {
        value <<= 1;
        chain.elements.push_back(value);
        if (boost::multiprecision::bit_test(n, static_cast<unsigned>(bit))) {
            value += 1;
            chain.elements.push_back(value);
        }
    }
    return chain;
}

inline unsigned binary_chain_length(const Natural& n) {
    return floor_log2(n) + ones_count(n) - 1;
}

}  // namespace chainlab
