#pragma once

/**
 * Mamdani fuzzy inference over seven linguistic labels: triangular
 * memberships on the normalized universe [-1, 1], min-conjunction rule
 * firing, and center-of-area defuzzification over singleton consequents.
 *
 * Everything here is an immutable value type and every function is pure.
 */

#include <array>
#include <cstddef>
#include <span>
#include <string_view>

namespace forcectl::fuzzy {

/// Linguistic labels, ordered NL < NM < NS < ZR < PS < PM < PL.
enum class Label : int { NL = -3, NM = -2, NS = -1, ZR = 0, PS = 1, PM = 2, PL = 3 };

inline constexpr std::size_t kLabelCount = 7;
inline constexpr std::array<Label, kLabelCount> kLabels{Label::NL, Label::NM, Label::NS, Label::ZR,
                                                        Label::PS, Label::PM, Label::PL};

/// Signed index in [-3, 3].
constexpr int signedIndex(Label label) { return static_cast<int>(label); }
/// Array slot in [0, 6].
constexpr std::size_t slot(Label label) { return static_cast<std::size_t>(signedIndex(label) + 3); }
constexpr Label labelAt(std::size_t slotIndex) { return kLabels[slotIndex]; }
/// Mirror about ZR: NL <-> PL, NM <-> PM, NS <-> PS.
constexpr Label negate(Label label) { return static_cast<Label>(-signedIndex(label)); }

/// Upper-case name, e.g. "PM".
std::string_view name(Label label);
/// Accepts either case ("PM" or "pm"). Throws ConfigError on anything else.
Label parseLabel(std::string_view text);

struct TriangularMF {
  double center = 0.0;
  double halfWidth = 1.0;

  /// 1 at the center, 0 outside [center - halfWidth, center + halfWidth], linear in between.
  [[nodiscard]] double degree(double x) const;

  friend bool operator==(const TriangularMF &, const TriangularMF &) = default;
};

double evalMf(const TriangularMF &mf, double x);

/// Seven triangular sets over [-1, 1], one per label, symmetric about ZR = 0.
class LinguisticPartition {
 public:
  /// Centers {-1, -2/3, -1/3, 0, 1/3, 2/3, 1}, half-width 1/3 each.
  static LinguisticPartition defaults();

  /// Validates and builds a custom layout. Throws ConfigError if centers are
  /// not strictly increasing, not symmetric about 0, outside [-1, 1], or a
  /// half-width is not positive.
  static LinguisticPartition fromArrays(std::span<const double, kLabelCount> centers,
                                      std::span<const double, kLabelCount> halfWidths);

  [[nodiscard]] const TriangularMF &operator[](Label label) const { return sets_[slot(label)]; }
  [[nodiscard]] double center(Label label) const { return sets_[slot(label)].center; }
  [[nodiscard]] const std::array<TriangularMF, kLabelCount> &sets() const { return sets_; }
  [[nodiscard]] bool isDefault() const;

  friend bool operator==(const LinguisticPartition &, const LinguisticPartition &) = default;

 private:
  explicit LinguisticPartition(std::array<TriangularMF, kLabelCount> sets) : sets_(sets) {}
  std::array<TriangularMF, kLabelCount> sets_;
};

inline constexpr double kUniverseMin = -1.0;
inline constexpr double kUniverseMax = 1.0;

/// Membership degree per label slot (index with slot()).
using Degrees = std::array<double, kLabelCount>;

/// Clamps x to the universe, then evaluates every membership function.
Degrees fuzzify(double x, const LinguisticPartition &partition);

enum class RuleVariant {
  /// The 7x7 table exactly as published, asymmetries included.
  AsPrinted,
  /// MacVicar-Whelan diagonal form: output index = clamp(e index + de index, -3, 3).
  Canonical,
};

std::string_view name(RuleVariant variant);
/// "as_printed" or "canonical". Throws ConfigError otherwise.
RuleVariant parseRuleVariant(std::string_view text);

class RuleBase {
 public:
  static RuleBase asPrinted();
  static RuleBase canonical();
  static RuleBase of(RuleVariant variant);

  /// Output label for the antecedent pair (error label, change-of-error label).
  [[nodiscard]] Label lookup(Label e, Label de) const { return table_[slot(e)][slot(de)]; }
  [[nodiscard]] RuleVariant variant() const { return variant_; }

 private:
  using Table = std::array<std::array<Label, kLabelCount>, kLabelCount>;
  RuleBase(RuleVariant variant, const Table &table) : variant_(variant), table_(table) {}

  RuleVariant variant_;
  Table table_;
};

Label ruleLookup(Label e, Label de, const RuleBase &rules);

struct FiredRule {
  /// min(mu_e, mu_de), in [0, 1].
  double strength = 0.0;
  /// Center of the consequent label in the output partition.
  double consequent = 0.0;
};

/// Fixed-capacity list of fired rules; at most one per antecedent pair.
class FiredSet {
 public:
  void push(FiredRule rule) { rules_[size_++] = rule; }
  [[nodiscard]] std::size_t size() const { return size_; }
  [[nodiscard]] bool empty() const { return size_ == 0; }
  [[nodiscard]] const FiredRule &operator[](std::size_t i) const { return rules_[i]; }
  [[nodiscard]] const FiredRule *begin() const { return rules_.data(); }
  [[nodiscard]] const FiredRule *end() const { return rules_.data() + size_; }
  [[nodiscard]] std::span<const FiredRule> view() const { return {rules_.data(), size_}; }

 private:
  std::array<FiredRule, kLabelCount * kLabelCount> rules_{};
  std::size_t size_ = 0;
};

/// One entry per antecedent pair whose firing strength is nonzero, in
/// (e slot, de slot) row-major order.
FiredSet fireRules(const Degrees &eDegrees, const Degrees &deDegrees, const RuleBase &rules,
                   const LinguisticPartition &output);

/// sum(mu_i * dU_i) / sum(mu_i); 0 when nothing fired.
double defuzzifyCoa(std::span<const FiredRule> fired);

/// fuzzify -> fireRules -> defuzzifyCoa for normalized crisp inputs.
double infer(double eNormalized, double deNormalized, const RuleBase &rules, const LinguisticPartition &input,
             const LinguisticPartition &output);

}  // namespace forcectl::fuzzy
