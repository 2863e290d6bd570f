#include "forcectl/fuzzy.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

#include "forcectl/errors.hpp"

namespace forcectl::fuzzy {

namespace {

constexpr std::array<std::string_view, kLabelCount> kNames{"NL", "NM", "NS", "ZR", "PS", "PM", "PL"};

constexpr double kSymmetryTolerance = 1e-12;

}  // namespace

std::string_view name(Label label) { return kNames[slot(label)]; }

Label parseLabel(std::string_view text) {
  std::string upper(text);
  std::transform(upper.begin(), upper.end(), upper.begin(), [](unsigned char c) { return std::toupper(c); });
  for (std::size_t i = 0; i < kLabelCount; ++i) {
    if (kNames[i] == upper) {
      return labelAt(i);
    }
  }
  throw ConfigError("unknown linguistic label '" + std::string(text) + "'");
}

double TriangularMF::degree(double x) const {
  // |x - c| is computed identically for (x, c) and (-x, -c), which keeps mirrored partitions exactly mirrored.
  const double distance = std::fabs(x - center);
  if (distance >= halfWidth) {
    return 0.0;
  }
  return 1.0 - distance / halfWidth;
}

double evalMf(const TriangularMF &mf, double x) { return mf.degree(x); }

LinguisticPartition LinguisticPartition::defaults() {
  std::array<TriangularMF, kLabelCount> sets{};
  for (std::size_t i = 0; i < kLabelCount; ++i) {
    sets[i] = {static_cast<double>(signedIndex(labelAt(i))) / 3.0, 1.0 / 3.0};
  }
  return LinguisticPartition(sets);
}

LinguisticPartition LinguisticPartition::fromArrays(std::span<const double, kLabelCount> centers,
                                                  std::span<const double, kLabelCount> halfWidths) {
  std::array<TriangularMF, kLabelCount> sets{};
  for (std::size_t i = 0; i < kLabelCount; ++i) {
    if (!std::isfinite(centers[i]) || !std::isfinite(halfWidths[i])) {
      throw ConfigError("partition: non-finite center or half-width");
    }
    if (!(halfWidths[i] > 0.0)) {
      throw ConfigError("partition: half-width of " + std::string(name(labelAt(i))) + " must be positive");
    }
    if (centers[i] < kUniverseMin || centers[i] > kUniverseMax) {
      throw ConfigError("partition: center of " + std::string(name(labelAt(i))) + " lies outside [-1, 1]");
    }
    if (i > 0 && !(centers[i] > centers[i - 1])) {
      throw ConfigError("partition: centers must be strictly increasing");
    }
    sets[i] = {centers[i], halfWidths[i]};
  }
  for (std::size_t i = 0; i < kLabelCount; ++i) {
    const std::size_t mirror = kLabelCount - 1 - i;
    if (std::fabs(centers[i] + centers[mirror]) > kSymmetryTolerance ||
        std::fabs(halfWidths[i] - halfWidths[mirror]) > kSymmetryTolerance) {
      throw ConfigError("partition: layout must be symmetric about ZR = 0");
    }
  }
  return LinguisticPartition(sets);
}

bool LinguisticPartition::isDefault() const { return *this == defaults(); }

Degrees fuzzify(double x, const LinguisticPartition &partition) {
  const double clamped = std::clamp(x, kUniverseMin, kUniverseMax);
  Degrees degrees{};
  for (std::size_t i = 0; i < kLabelCount; ++i) {
    degrees[i] = partition.sets()[i].degree(clamped);
  }
  return degrees;
}

std::string_view name(RuleVariant variant) {
  return variant == RuleVariant::AsPrinted ? "as_printed" : "canonical";
}

RuleVariant parseRuleVariant(std::string_view text) {
  if (text == "as_printed") {
    return RuleVariant::AsPrinted;
  }
  if (text == "canonical") {
    return RuleVariant::Canonical;
  }
  throw ConfigError("unknown rule base '" + std::string(text) + "' (expected as_printed or canonical)");
}

RuleBase RuleBase::asPrinted() {
  using enum Label;
  // Rows are the error label from PL down to NL, columns the change-of-error label NL..PL,
  // in the order the table is usually printed.
  constexpr std::array<std::array<Label, kLabelCount>, kLabelCount> printed{{
      {NL, NM, NS, ZR, PM, PL, PL},  // e = PL
      {NL, NL, NM, ZR, PM, PL, PL},  // e = PM
      {NL, NL, NS, ZR, PS, PL, PL},  // e = PS
      {NL, NM, NS, ZR, PS, PM, PL},  // e = ZR
      {NL, NL, NS, ZR, PS, PL, PL},  // e = NS
      {NL, NL, NM, ZR, PM, PL, PL},  // e = NM
      {NL, NL, NM, ZR, PS, PM, PL},  // e = NL
  }};
  Table table{};
  for (std::size_t row = 0; row < kLabelCount; ++row) {
    table[kLabelCount - 1 - row] = printed[row];
  }
  return {RuleVariant::AsPrinted, table};
}

RuleBase RuleBase::canonical() {
  Table table{};
  for (std::size_t e = 0; e < kLabelCount; ++e) {
    for (std::size_t de = 0; de < kLabelCount; ++de) {
      const int sum = signedIndex(labelAt(e)) + signedIndex(labelAt(de));
      table[e][de] = static_cast<Label>(std::clamp(sum, -3, 3));
    }
  }
  return {RuleVariant::Canonical, table};
}

RuleBase RuleBase::of(RuleVariant variant) {
  return variant == RuleVariant::AsPrinted ? asPrinted() : canonical();
}

Label ruleLookup(Label e, Label de, const RuleBase &rules) { return rules.lookup(e, de); }

FiredSet fireRules(const Degrees &eDegrees, const Degrees &deDegrees, const RuleBase &rules,
                   const LinguisticPartition &output) {
  FiredSet fired;
  for (std::size_t e = 0; e < kLabelCount; ++e) {
    if (eDegrees[e] <= 0.0) {
      continue;
    }
    for (std::size_t de = 0; de < kLabelCount; ++de) {
      const double strength = std::min(eDegrees[e], deDegrees[de]);
      if (strength > 0.0) {
        fired.push({strength, output.center(rules.lookup(labelAt(e), labelAt(de)))});
      }
    }
  }
  return fired;
}

double defuzzifyCoa(std::span<const FiredRule> fired) {
  double weighted = 0.0;
  double total = 0.0;
  for (const auto &rule : fired) {
    weighted += rule.strength * rule.consequent;
    total += rule.strength;
  }
  if (total <= 0.0) {
    return 0.0;
  }
  return weighted / total;
}

double infer(double eNormalized, double deNormalized, const RuleBase &rules, const LinguisticPartition &input,
             const LinguisticPartition &output) {
  const auto fired = fireRules(fuzzify(eNormalized, input), fuzzify(deNormalized, input), rules, output);
  return defuzzifyCoa(fired.view());
}

}  // namespace forcectl::fuzzy
