#pragma once

#include <string>
#include <variant>

#include <json.hpp>

#include "geometry.hpp"

namespace crackwave {

// Mesh JSON: { "dim": 2|3, "vertices": [[...]...], "cells": [[i,j,k]...], "tags": {...},
//              "orientation": "up" | "ccw" | "closed" }

nlohmann::json mesh_to_json(const CrackMesh& mesh);
nlohmann::json mesh_to_json(const Mesh2D& mesh);

/// Parses and validates. Field diagnostics name the offending path, e.g. vertices[3][1].
CrackMesh crack_mesh_from_json(const nlohmann::json& j, const CrackMeshChecks& checks = {});
Mesh2D mesh2d_from_json(const nlohmann::json& j);

using AnyMesh = std::variant<CrackMesh, Mesh2D>;

/// Reads a mesh file; malformed JSON reports line and column, bad fields their path.
AnyMesh read_mesh(const std::string& path, const CrackMeshChecks& checks = {});
AnyMesh parse_mesh(const std::string& text, const CrackMeshChecks& checks = {});
void write_mesh(const std::string& path, const AnyMesh& mesh);

}  // namespace crackwave
