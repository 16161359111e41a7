#pragma once

#include <optional>
#include <string>

#include "am/engine.hpp"
#include "am/model.hpp"

namespace am {

// Result of reading a message document. On failure `message` is empty and
// `diagnostic` points at the offending place (byte offset for syntax errors,
// JSON path or validation report otherwise).
struct ParseResult {
  std::optional<AssignmentMessage> message;
  std::string diagnostic;

  bool ok() const { return message.has_value(); }
};

// Reads the JSON message format (see README). Goods without variables are
// completed with fixed dummy variables before validation, so a parsed message
// is always validate_message-clean.
ParseResult parse_message(const std::string& text);

// Canonical JSON for a message: stable key order, 2-space indent. Parsing the
// output reproduces the message (up to dummy completion, which is idempotent).
std::string serialize_message(const AssignmentMessage& msg);

// Graphviz DOT for the compiled network. Vertices carry their balance-
// equation labels, arcs their set, bounds and good/value tags. Byte-for-byte
// deterministic for a given message.
std::string export_graph(const AssignmentMessage& msg);

std::string table_to_json(const ValuationTable& table);

}  // namespace am
