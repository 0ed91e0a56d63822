#pragma once

#include <optional>
#include <string_view>

namespace qfractal {

/// Symbols available to numeric expressions in config files.
struct ExpressionContext {
    std::optional<double> T;  // recurrence period of the scenario's state
    double L = 1.0;
};

/// Evaluates decimals and simple expressions such as "T/sqrt(2)", "29T/41",
/// "-L/3" or "2^-0.5". Grammar: + - * / ^, parentheses, implicit
/// multiplication by juxtaposition, constants pi, T, L and the function sqrt.
/// Throws ConfigError on malformed input or when T is needed but unknown.
double evaluate_expression(std::string_view text, const ExpressionContext& context = {});

/// True when the expression mentions the symbol T.
bool expression_uses_period(std::string_view text);

}  // namespace qfractal
