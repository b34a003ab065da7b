#include "symschrod/catalog.hpp"

#include <regex>
#include <stdexcept>

#include "symschrod/parser.hpp"

namespace symschrod {

namespace {

Generator blank(int dim, const Expr& scale, const std::string& name) {
  Generator g;
  g.dim = dim;
  g.scale = scale;
  g.name = name;
  g.xi.assign(dim, Expr());
  return g;
}

int axis(const std::string& key, std::size_t pos, int dim) {
  int a = key[pos] - '0';
  if (a < 1 || a > dim) throw std::invalid_argument("generator " + key + " needs dimension >= " + std::to_string(a));
  return a;
}

Generator rotation(int a, int b, int dim, const std::string& name) {
  if (a > dim || b > dim) throw std::invalid_argument("generator " + name + " not available in dimension " + std::to_string(dim));
  Generator g = blank(dim, -imag(), name);
  g.xi[b - 1] = var(a);
  g.xi[a - 1] = -var(b);
  return g;
}

Expr x_squared(int dim) {
  Expr s;
  for (int a = 1; a <= dim; ++a) s += var(a) * var(a);
  return s;
}

}  // namespace

Generator standard_generator(const std::string& key, int dim, int sign, const Expr& omega) {
  const Expr t = t_var();
  if (key == "P0") {
    Generator g = blank(dim, imag(), key);
    g.xi0 = Expr(1);
    return g;
  }
  if (key == "I") {
    Generator g = blank(dim, -imag(), key);
    g.eta = Expr(1);
    return g;
  }
  if (key == "D") {
    Generator g = blank(dim, imag(), key);
    g.xi0 = Expr(2) * t;
    for (int a = 1; a <= dim; ++a) g.xi[a - 1] = var(a);
    return g;
  }
  if (key == "A") {
    Generator g = blank(dim, imag(), key);
    g.xi0 = t * t;
    for (int a = 1; a <= dim; ++a) g.xi[a - 1] = t * var(a);
    g.eta = Expr(Rational(-1, 2)) * x_squared(dim);
    return g;
  }
  if (key.size() == 2 && key[0] == 'P') {
    int a = axis(key, 1, dim);
    Generator g = blank(dim, -imag(), key);
    g.xi[a - 1] = Expr(1);
    return g;
  }
  if (key.size() == 2 && key[0] == 'G') {
    int a = axis(key, 1, dim);
    Generator g = blank(dim, -imag(), key);
    g.xi[a - 1] = t;
    g.eta = -var(a);
    return g;
  }
  if (key.size() == 3 && key[0] == 'M') return rotation(key[1] - '0', key[2] - '0', dim, key);
  if (key == "L3") return rotation(1, 2, dim, key);
  if (key == "L1") return rotation(2, 3, dim, key);
  if (key == "L2") return rotation(3, 1, dim, key);
  if (key == "A1" || key == "A2") {
    Expr w2t = Expr(2) * omega * t;
    Expr p;
    if (key == "A1") {
      p = (sign > 0 ? sin(w2t) : sinh(w2t)) / omega;
    } else {
      p = (sign > 0 ? cos(w2t) : cosh(w2t)) / omega;
    }
    Expr p1 = differentiate(p, 0), p2 = differentiate(p1, 0);
    Generator g = blank(dim, imag(), key + (sign > 0 ? "+" : "-"));
    g.xi0 = p;
    for (int a = 1; a <= dim; ++a) g.xi[a - 1] = Expr(Rational(1, 2)) * p1 * var(a);
    g.eta = Expr(Rational(-1, 4)) * p2 * x_squared(dim);
    return g;
  }
  bool hat = key.size() == 3 && key[0] == 'B' && key[1] == 'h';
  if ((key.size() == 2 && key[0] == 'B') || hat) {
    int a = axis(key, hat ? 2 : 1, dim);
    Expr wt = omega * t;
    Expr q = hat ? (sign > 0 ? cos(wt) : cosh(wt)) : (sign > 0 ? sin(wt) : sinh(wt));
    Generator g = blank(dim, -imag(), key + (sign > 0 ? "+" : "-"));
    g.xi[a - 1] = q;
    g.eta = -differentiate(q, 0) * var(a);
    return g;
  }
  throw std::invalid_argument("unknown generator '" + key + "'");
}

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

// Splits at depth-0 '+'/'-' that are not exponent signs. Each piece keeps its sign.
std::vector<std::pair<int, std::string>> split_terms(const std::string& s) {
  std::vector<std::pair<int, std::string>> out;
  int depth = 0, sign = 1;
  std::string cur;
  char prev = 0;
  for (char c : s) {
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (depth == 0 && (c == '+' || c == '-') && prev != '^') {
      int s = c == '-' ? -1 : 1;
      if (trim(cur).empty()) {
        sign *= s;
      } else {
        out.emplace_back(sign, trim(cur));
        sign = s;
      }
      cur.clear();
    } else {
      cur += c;
    }
    if (c != ' ') prev = c;
  }
  if (!trim(cur).empty()) out.emplace_back(sign, trim(cur));
  return out;
}

std::vector<std::string> split_factors(const std::string& s) {
  std::vector<std::string> out;
  int depth = 0;
  std::string cur;
  for (char c : s) {
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (depth == 0 && c == '*') {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(trim(cur));
  return out;
}

}  // namespace

Generator parse_generator(const std::string& text, int dim, const Bindings& regime) {
  static const std::regex token(
      R"(^(P0|P[1-3]|M(?:12|13|23)|L[1-3]|D|G[1-3]|A[12]?|I|B[1-3]|Bh[1-3])(?:\^([+-]|eps[1-3]?))?(?:\((.*)\))?$)");
  DiffOp total(dim);
  Expr scale;
  bool have_scale = false;
  for (const auto& [term_sign, term] : split_terms(text)) {
    Expr coef(term_sign);
    std::optional<Generator> gen;
    for (const auto& f : split_factors(term)) {
      std::smatch m;
      if (std::regex_match(f, m, token)) {
        if (gen) throw std::invalid_argument("two generators multiplied in '" + term + "'");
        std::string key = m[1];
        bool family = key == "A1" || key == "A2" || key[0] == 'B';
        int s = 1;
        if (m[2].matched) {
          std::string sg = m[2];
          if (sg == "+") {
            s = 1;
          } else if (sg == "-") {
            s = -1;
          } else {
            auto it = regime.find(sg);
            if (it == regime.end() || !it->second.is_rational())
              throw std::invalid_argument("sign '" + sg + "' of " + key + " is not fixed by the regime");
            Rational v = it->second.as_rational();
            if (v != 1 && v != -1) throw std::invalid_argument("sign '" + sg + "' must be +1 or -1");
            s = v > 0 ? 1 : -1;
          }
        } else if (family) {
          throw std::invalid_argument(key + " needs a sign, e.g. " + key + "^+");
        }
        Expr omega = param("omega");
        if (m[3].matched) omega = substitute(parse_expr(m[3], dim), regime);
        if (!family && (m[2].matched || m[3].matched))
          throw std::invalid_argument(key + " takes no sign or frequency");
        gen = standard_generator(key, dim, s, omega);
      } else {
        coef *= substitute(parse_expr(f, dim), regime);
      }
    }
    if (gen) {
      if (!have_scale) {
        scale = gen->scale;
        have_scale = true;
      }
      total = total + coef * gen->to_diffop();
    } else {
      total = total + DiffOp::multiplication(coef, dim);
    }
  }
  if (!have_scale) scale = -imag();
  return generator_from_diffop(total, scale, trim(text));
}

std::vector<std::string> free_particle_basis(int dim) {
  if (dim == 3) return {"P0", "P1", "P2", "P3", "L1", "L2", "L3", "G1", "G2", "G3", "D", "A", "I"};
  if (dim == 2) return {"P0", "P1", "P2", "L3", "G1", "G2", "D", "A", "I"};
  return {"P0", "P1", "G1", "D", "A", "I"};
}

std::vector<IdentityCheck> verify_free_particle_identities(int dim) {
  auto op = [&](const std::string& k) { return standard_generator(k, dim).to_diffop(); };
  std::vector<IdentityCheck> out;
  std::vector<DiffOp> P, G;
  for (int a = 1; a <= dim; ++a) {
    P.push_back(op("P" + std::to_string(a)));
    G.push_back(op("G" + std::to_string(a)));
  }
  for (int a = 1; a <= dim; ++a)
    for (int b = a + 1; b <= dim; ++b) {
      DiffOp lhs = compose(P[a - 1], G[b - 1]) - compose(P[b - 1], G[a - 1]);
      DiffOp rhs = op("M" + std::to_string(a) + std::to_string(b));
      out.push_back({"P" + std::to_string(a) + "G" + std::to_string(b) + " - P" + std::to_string(b) + "G" +
                         std::to_string(a) + " = M" + std::to_string(a) + std::to_string(b),
                     (lhs - rhs).is_zero()});
    }
  DiffOp P2(dim), PG(dim), GG(dim);
  for (int a = 0; a < dim; ++a) {
    P2 = P2 + compose(P[a], P[a]);
    PG = PG + compose(P[a], G[a]) + compose(G[a], P[a]);
    GG = GG + compose(G[a], G[a]);
  }
  const Expr t = t_var();
  DiffOp bracket = P2 - Expr(2) * op("P0");
  out.push_back({"P_aG_a + G_aP_a = 2D + 2t(P^2 - 2P0)", (PG - Expr(2) * op("D") - Expr(2) * t * bracket).is_zero()});
  out.push_back({"G_aG_a = 2A + t^2(P^2 - 2P0)", (GG - Expr(2) * op("A") - t * t * bracket).is_zero()});
  return out;
}

}  // namespace symschrod
