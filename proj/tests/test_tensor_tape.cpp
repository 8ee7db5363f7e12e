#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "sentord/errors.hpp"
#include "sentord/tape.hpp"
#include "sentord/tensor.hpp"

using namespace sentord;

namespace {

Tensor random_tensor(std::vector<std::size_t> shape, std::mt19937_64& rng, double lo = -1.0,
                     double hi = 1.0) {
    std::size_t n = 1;
    for (auto s : shape) n *= s;
    std::uniform_real_distribution<double> d(lo, hi);
    std::vector<double> data(n);
    for (auto& v : data) v = d(rng);
    return Tensor(std::move(shape), std::move(data));
}

// Central finite differences on a scalar-valued tape program, checked against
// the backward pass for every element of every input.
template <typename Build>
void check_gradients(std::vector<Tensor> inputs, Build build, double tol = 1e-6) {
    const double step = 1e-5;
    std::vector<Parameter> params;
    params.reserve(inputs.size());
    for (std::size_t i = 0; i < inputs.size(); ++i)
        params.emplace_back("in" + std::to_string(i), inputs[i]);

    Tape t;
    std::vector<Var> vars;
    for (auto& p : params) vars.push_back(t.param(p));
    t.backward(build(t, vars));

    for (std::size_t i = 0; i < params.size(); ++i) {
        for (std::size_t k = 0; k < params[i].value.numel(); ++k) {
            const double saved = params[i].value[k];
            auto eval = [&](double v) {
                params[i].value[k] = v;
                Tape t2;
                std::vector<Var> vs;
                for (auto& p : params) vs.push_back(t2.param(p));
                return t2.value(build(t2, vs)).item();
            };
            const double up = eval(saved + step);
            const double down = eval(saved - step);
            params[i].value[k] = saved;
            const double fd = (up - down) / (2.0 * step);
            const double ga = params[i].grad[k];
            CHECK(std::abs(ga - fd) / (std::abs(ga) + std::abs(fd) + 1e-12) <= tol);
        }
    }
}

}  // namespace

TEST_CASE("tensor shape accessors and validation") {
    Tensor m({2, 3});
    CHECK(m.rows() == 2);
    CHECK(m.cols() == 3);
    CHECK(m.numel() == 6);
    m.at(1, 2) = 5.0;
    CHECK(m[5] == 5.0);

    Tensor v({3});
    CHECK_THROWS_AS((void)v.rows(), ShapeError);
    CHECK_THROWS_AS(Tensor({2}, {1.0}), ShapeError);
    CHECK_THROWS_AS(Tensor({1}, {std::nan("")}), NumericError);
    CHECK_THROWS_AS((void)m.item(), NotScalar);
    CHECK(Tensor::scalar(3.5).item() == 3.5);
}

TEST_CASE("backward of a plain sum gives ones") {
    Parameter p("p", Tensor({3}, {2.0, -1.0, 0.5}));
    Tape t;
    Var v = t.param(p);
    Var ones = t.leaf(Tensor({3}, {1.0, 1.0, 1.0}));
    t.backward(t.dot(v, ones));
    CHECK(p.grad[0] == 1.0);
    CHECK(p.grad[1] == 1.0);
    CHECK(p.grad[2] == 1.0);
}

TEST_CASE("multiplying by zero kills the gradient") {
    Parameter p("p", Tensor({2}, {3.0, 4.0}));
    Tape t;
    Var v = t.param(p);
    Var zeros = t.leaf(Tensor({2}));
    t.backward(t.dot(v, zeros));
    CHECK(p.grad[0] == 0.0);
    CHECK(p.grad[1] == 0.0);
}

TEST_CASE("backward rejects non-scalar roots") {
    Parameter p("p", Tensor({2}, {1.0, 2.0}));
    Tape t;
    Var v = t.param(p);
    CHECK_THROWS_AS(t.backward(v), NotScalar);
}

TEST_CASE("shape errors name both operand shapes") {
    Tape t;
    Var a = t.leaf(Tensor({2}));
    Var b = t.leaf(Tensor({3}));
    try {
        t.add(a, b);
        FAIL("expected ShapeError");
    } catch (const ShapeError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("(2)") != std::string::npos);
        CHECK(msg.find("(3)") != std::string::npos);
    }
}

TEST_CASE("parameter nodes are cached per tape and gradients accumulate") {
    Parameter p("p", Tensor({2}, {1.0, 2.0}));
    Tape t;
    Var a = t.param(p);
    Var b = t.param(p);
    CHECK(a.idx == b.idx);
    t.backward(t.dot(a, b));  // d/dp (p.p) = 2p
    CHECK(p.grad[0] == 2.0);
    CHECK(p.grad[1] == 4.0);
}

TEST_CASE("max over operands keeps the earliest argmax on ties") {
    Parameter a("a", Tensor({2}, {1.0, 5.0}));
    Parameter b("b", Tensor({2}, {1.0, 3.0}));
    Tape t;
    Var m = t.max_over({t.param(a), t.param(b)});
    CHECK(t.value(m)[0] == 1.0);
    CHECK(t.value(m)[1] == 5.0);
    Var ones = t.leaf(Tensor({2}, {1.0, 1.0}));
    t.backward(t.dot(m, ones));
    CHECK(a.grad[0] == 1.0);  // tie at index 0 goes to the first operand
    CHECK(b.grad[0] == 0.0);
    CHECK(a.grad[1] == 1.0);
    CHECK(b.grad[1] == 0.0);
}

TEST_CASE("lookup accumulates repeated rows") {
    Parameter table("e", Tensor({3, 2}, {1, 2, 3, 4, 5, 6}));
    Tape t;
    Var rows = t.lookup(t.param(table), {1, 1, 0});
    CHECK(t.value(rows).rows() == 3);
    CHECK(t.value(rows).at(0, 0) == 3.0);
    Var ones = t.leaf(Tensor({2}, {1.0, 1.0}));
    t.backward(t.dot(t.mean_rows(rows), ones));
    CHECK(table.grad.at(1, 0) == doctest::Approx(2.0 / 3.0));
    CHECK(table.grad.at(0, 0) == doctest::Approx(1.0 / 3.0));
    CHECK(table.grad.at(2, 0) == 0.0);
}

TEST_CASE("stable sigmoid saturates without leaving (0,1)") {
    CHECK(stable_sigmoid(0.0) == 0.5);
    CHECK(stable_sigmoid(800.0) < 1.0);
    CHECK(stable_sigmoid(800.0) > 0.999);
    CHECK(stable_sigmoid(-800.0) > 0.0);
    CHECK(stable_sigmoid(-800.0) < 1e-6);
}

TEST_CASE("every primitive passes a finite-difference check") {
    std::mt19937_64 rng(91);

    SUBCASE("matvec_t, add, dot") {
        check_gradients({random_tensor({3, 2}, rng), random_tensor({3}, rng),
                         random_tensor({2}, rng)},
                        [](Tape& t, std::vector<Var>& v) {
                            Var h = t.add(t.matvec_t(v[0], v[1]), v[2]);
                            return t.dot(h, h);
                        });
    }
    SUBCASE("matmul") {
        check_gradients({random_tensor({2, 3}, rng), random_tensor({3, 2}, rng)},
                        [](Tape& t, std::vector<Var>& v) {
                            Var m = t.matmul(v[0], v[1]);
                            return t.sum_squares(m);
                        });
    }
    SUBCASE("concat and slice") {
        check_gradients({random_tensor({2}, rng), random_tensor({3}, rng)},
                        [](Tape& t, std::vector<Var>& v) {
                            Var c = t.concat({v[0], v[1]});
                            return t.sum_squares(t.slice(c, 1, 3));
                        });
    }
    SUBCASE("sigmoid, tanh, mul, scale") {
        check_gradients({random_tensor({4}, rng), random_tensor({4}, rng)},
                        [](Tape& t, std::vector<Var>& v) {
                            Var a = t.sigmoid(v[0]);
                            Var b = t.tanh(v[1]);
                            return t.sum_squares(t.scale(t.mul(a, b), 1.7));
                        });
    }
    SUBCASE("log and softplus") {
        check_gradients({random_tensor({4}, rng, 0.3, 2.0)},
                        [](Tape& t, std::vector<Var>& v) {
                            return t.sum_squares(t.log(t.softplus(v[0])));
                        });
    }
    SUBCASE("mean_rows, row, max_over, add_n") {
        check_gradients({random_tensor({3, 2}, rng), random_tensor({3, 2}, rng)},
                        [](Tape& t, std::vector<Var>& v) {
                            Var m = t.max_over({t.mean_rows(v[0]), t.row(v[1], 1)});
                            Var s = t.add_n({m, t.row(v[0], 0), t.row(v[1], 2)});
                            return t.sum_squares(s);
                        });
    }
}
