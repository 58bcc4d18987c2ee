#pragma once

// JSON encoding of inputs and results. Matrices are {"n", "data": [[row], ...]},
// vectors {"n", "data": [...]}, parallelepipeds {"n", "edges": [[v_1], ...]}.

#include <string>

#include <json.hpp>

#include "inscribed/oracle.hpp"
#include "inscribed/tolerance.hpp"

namespace inscribed {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchema = "inscribed-extrema/1";

/// Whole file as a string; throws ParseError when unreadable.
std::string read_text_file(const std::string& path);
/// Writes through a temporary file in the same directory and renames it over path.
void write_file_atomically(const std::string& path, const std::string& content);
/// 64-bit FNV-1a as 16 hex digits.
std::string fnv1a64_hex(const std::string& bytes);

/// Throws ParseError on malformed text, missing fields, or n disagreeing with the data.
Json parse_json(const std::string& text);
Matrix matrix_from_json(const Json& j);
Vector vector_from_json(const Json& j);
/// Edge vectors become the columns of the returned matrix.
Matrix edges_from_json(const Json& j);

Json to_json(const Matrix& m);
Json to_json(const Vector& v);
Json matrix_file_json(const Matrix& m);
Json vector_file_json(const Vector& v);
Json to_json(const SphereOrthotope& q);
Json to_json(const Parallelepiped& p);
Json to_json(const FunctionalValue& v);
Json to_json(const ExtremalCertificate& c);
Json to_json(const Construction& c);
Json to_json(const EqualizationReport& r);
Json to_json(const SearchReport& r);
Json to_json(const RshReport& r);
Json to_json(const ToleranceConfig& t);

}  // namespace inscribed
