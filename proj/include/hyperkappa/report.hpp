#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "hyperkappa/types.hpp"

namespace hyperkappa {

/// Insertion-ordered JSON value with fixed float formatting (17 significant
/// digits), so identical inputs serialize byte-identically.
class Json {
  public:
    enum class Kind { null, boolean, integer, real, text, array, object };

    Json() : kind_(Kind::null) {}
    static Json boolean(bool v);
    static Json integer(long long v);
    static Json real(double v);
    static Json text(std::string v);
    static Json array();
    static Json object();

    Json& push(Json v);                          // arrays
    Json& set(const std::string& key, Json v);   // objects

    static Json complex_pair(const Complex& z);
    static Json complex_matrix(const CMatrix& m);  // row-major [re, im] pairs
    static Json complex_list(const std::vector<Complex>& v);
    static Json int_matrix(const IMatrix& m);

    std::string dump(int indent = 2) const;

  private:
    void write(std::string& out, int indent, int depth) const;

    Kind kind_;
    bool bool_ = false;
    long long int_ = 0;
    double real_ = 0.0;
    std::string text_;
    std::vector<Json> items_;
    std::vector<std::pair<std::string, Json>> fields_;
};

std::string format_double(double v);

}  // namespace hyperkappa
