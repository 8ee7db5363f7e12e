#include "sentord/tape.hpp"

#include <cmath>
#include <sstream>

#include "sentord/errors.hpp"

namespace sentord {

namespace {

[[noreturn]] void shape_mismatch(const char* op, const Tensor& a, const Tensor& b) {
    std::ostringstream os;
    os << op << ": shapes " << a.shape_str() << " and " << b.shape_str() << " do not conform";
    throw ShapeError(os.str());
}

void require_vector(const char* op, const Tensor& t) {
    if (t.rank() != 1) throw ShapeError(std::string(op) + ": expected rank-1 tensor, got " + t.shape_str());
}

void require_matrix(const char* op, const Tensor& t) {
    if (t.rank() != 2) throw ShapeError(std::string(op) + ": expected rank-2 tensor, got " + t.shape_str());
}

}  // namespace

double stable_sigmoid(double x) {
    double p;
    if (x >= 0.0) {
        p = 1.0 / (1.0 + std::exp(-x));
    } else {
        const double e = std::exp(x);
        p = e / (1.0 + e);
    }
    // keep log(p) and log(1-p) finite for any finite logit
    const double lo = std::nextafter(0.0, 1.0);
    const double hi = std::nextafter(1.0, 0.0);
    if (p < lo) p = lo;
    if (p > hi) p = hi;
    return p;
}

Var Tape::push(Tensor value, std::function<void(Tape&)> back) {
#ifndef NDEBUG
    value.check_finite("primitive output");
#endif
    Node n;
    n.grad = Tensor::zeros_like(value);
    n.value = std::move(value);
    n.back = std::move(back);
    nodes_.push_back(std::move(n));
    return Var{nodes_.size() - 1};
}

Var Tape::leaf(Tensor value) { return push(std::move(value), {}); }

Var Tape::param(Parameter& p) {
    auto it = param_nodes_.find(&p);
    if (it != param_nodes_.end()) return Var{it->second};
    Var v = push(p.value, {});
    nodes_[v.idx].bound = &p;
    param_nodes_[&p] = v.idx;
    return v;
}

Var Tape::matmul(Var a, Var b) {
    const Tensor& A = value(a);
    const Tensor& B = value(b);
    require_matrix("matmul", A);
    require_matrix("matmul", B);
    if (A.cols() != B.rows()) shape_mismatch("matmul", A, B);
    const std::size_t m = A.rows(), k = A.cols(), n = B.cols();
    Tensor C({m, n});
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t p = 0; p < k; ++p) {
            const double av = A.at(i, p);
            for (std::size_t j = 0; j < n; ++j) C.at(i, j) += av * B.at(p, j);
        }
    return push(std::move(C), [a, b, m, k, n, self = nodes_.size()](Tape& t) {
        const Tensor& g = t.grad(Var{self});
        const Tensor& A = t.value(a);
        const Tensor& B = t.value(b);
        Tensor& ga = t.grad_mut(a);
        Tensor& gb = t.grad_mut(b);
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                const double gv = g.at(i, j);
                for (std::size_t p = 0; p < k; ++p) {
                    ga.at(i, p) += gv * B.at(p, j);
                    gb.at(p, j) += A.at(i, p) * gv;
                }
            }
    });
}

Var Tape::matvec_t(Var w, Var x) {
    const Tensor& W = value(w);
    const Tensor& X = value(x);
    require_matrix("matvec_t", W);
    require_vector("matvec_t", X);
    if (W.rows() != X.numel()) shape_mismatch("matvec_t", W, X);
    const std::size_t m = W.rows(), n = W.cols();
    Tensor y({n});
    for (std::size_t i = 0; i < m; ++i) {
        const double xv = X[i];
        for (std::size_t j = 0; j < n; ++j) y[j] += W.at(i, j) * xv;
    }
    return push(std::move(y), [w, x, m, n, self = nodes_.size()](Tape& t) {
        const Tensor& g = t.grad(Var{self});
        const Tensor& W = t.value(w);
        const Tensor& X = t.value(x);
        Tensor& gw = t.grad_mut(w);
        Tensor& gx = t.grad_mut(x);
        for (std::size_t i = 0; i < m; ++i) {
            const double xv = X[i];
            double acc = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                gw.at(i, j) += xv * g[j];
                acc += W.at(i, j) * g[j];
            }
            gx[i] += acc;
        }
    });
}

Var Tape::dot(Var a, Var b) {
    const Tensor& A = value(a);
    const Tensor& B = value(b);
    require_vector("dot", A);
    require_vector("dot", B);
    if (A.numel() != B.numel()) shape_mismatch("dot", A, B);
    double s = 0.0;
    for (std::size_t i = 0; i < A.numel(); ++i) s += A[i] * B[i];
    return push(Tensor::scalar(s), [a, b, self = nodes_.size()](Tape& t) {
        const double g = t.grad(Var{self})[0];
        const Tensor& A = t.value(a);
        const Tensor& B = t.value(b);
        Tensor& ga = t.grad_mut(a);
        Tensor& gb = t.grad_mut(b);
        for (std::size_t i = 0; i < A.numel(); ++i) {
            ga[i] += g * B[i];
            gb[i] += g * A[i];
        }
    });
}

Var Tape::add(Var a, Var b) {
    const Tensor& A = value(a);
    const Tensor& B = value(b);
    if (!A.same_shape(B)) shape_mismatch("add", A, B);
    Tensor out = A;
    for (std::size_t i = 0; i < out.numel(); ++i) out[i] += B[i];
    return push(std::move(out), [a, b, self = nodes_.size()](Tape& t) {
        const Tensor& g = t.grad(Var{self});
        Tensor& ga = t.grad_mut(a);
        Tensor& gb = t.grad_mut(b);
        for (std::size_t i = 0; i < g.numel(); ++i) {
            ga[i] += g[i];
            gb[i] += g[i];
        }
    });
}

Var Tape::add_n(const std::vector<Var>& parts) {
    if (parts.empty()) throw ShapeError("add_n: no operands");
    Tensor out = value(parts[0]);
    for (std::size_t p = 1; p < parts.size(); ++p) {
        const Tensor& t = value(parts[p]);
        if (!t.same_shape(out)) shape_mismatch("add_n", out, t);
        for (std::size_t i = 0; i < out.numel(); ++i) out[i] += t[i];
    }
    return push(std::move(out), [parts, self = nodes_.size()](Tape& t) {
        const Tensor& g = t.grad(Var{self});
        for (Var p : parts) {
            Tensor& gp = t.grad_mut(p);
            for (std::size_t i = 0; i < g.numel(); ++i) gp[i] += g[i];
        }
    });
}

Var Tape::concat(const std::vector<Var>& parts) {
    if (parts.empty()) throw ShapeError("concat: no operands");
    std::size_t total = 0;
    for (Var p : parts) {
        require_vector("concat", value(p));
        total += value(p).numel();
    }
    Tensor out({total});
    std::size_t off = 0;
    for (Var p : parts) {
        const Tensor& t = value(p);
        for (std::size_t i = 0; i < t.numel(); ++i) out[off + i] = t[i];
        off += t.numel();
    }
    return push(std::move(out), [parts, self = nodes_.size()](Tape& t) {
        const Tensor& g = t.grad(Var{self});
        std::size_t off = 0;
        for (Var p : parts) {
            Tensor& gp = t.grad_mut(p);
            for (std::size_t i = 0; i < gp.numel(); ++i) gp[i] += g[off + i];
            off += gp.numel();
        }
    });
}

Var Tape::slice(Var v, std::size_t offset, std::size_t len) {
    const Tensor& V = value(v);
    require_vector("slice", V);
    if (offset + len > V.numel()) {
        std::ostringstream os;
        os << "slice [" << offset << "," << offset + len << ") out of range for " << V.shape_str();
        throw ShapeError(os.str());
    }
    Tensor out({len});
    for (std::size_t i = 0; i < len; ++i) out[i] = V[offset + i];
    return push(std::move(out), [v, offset, len, self = nodes_.size()](Tape& t) {
        const Tensor& g = t.grad(Var{self});
        Tensor& gv = t.grad_mut(v);
        for (std::size_t i = 0; i < len; ++i) gv[offset + i] += g[i];
    });
}

Var Tape::row(Var m, std::size_t i) {
    const Tensor& M = value(m);
    require_matrix("row", M);
    if (i >= M.rows()) throw ShapeError("row index out of range for " + M.shape_str());
    const std::size_t d = M.cols();
    Tensor out({d});
    for (std::size_t j = 0; j < d; ++j) out[j] = M.at(i, j);
    return push(std::move(out), [m, i, d, self = nodes_.size()](Tape& t) {
        const Tensor& g = t.grad(Var{self});
        Tensor& gm = t.grad_mut(m);
        for (std::size_t j = 0; j < d; ++j) gm.at(i, j) += g[j];
    });
}

Var Tape::lookup(Var table, const std::vector<int>& ids) {
    const Tensor& T = value(table);
    require_matrix("lookup", T);
    if (ids.empty()) throw ShapeError("lookup: empty id list");
    const std::size_t d = T.cols();
    Tensor out({ids.size(), d});
    for (std::size_t r = 0; r < ids.size(); ++r) {
        const int id = ids[r];
        if (id < 0 || static_cast<std::size_t>(id) >= T.rows()) {
            throw ShapeError("lookup: id out of range for table " + T.shape_str());
        }
        for (std::size_t j = 0; j < d; ++j) out.at(r, j) = T.at(static_cast<std::size_t>(id), j);
    }
    return push(std::move(out), [table, ids, d, self = nodes_.size()](Tape& t) {
        const Tensor& g = t.grad(Var{self});
        Tensor& gt = t.grad_mut(table);
        for (std::size_t r = 0; r < ids.size(); ++r)
            for (std::size_t j = 0; j < d; ++j)
                gt.at(static_cast<std::size_t>(ids[r]), j) += g.at(r, j);
    });
}

Var Tape::mean_rows(Var m) {
    const Tensor& M = value(m);
    require_matrix("mean_rows", M);
    const std::size_t n = M.rows(), d = M.cols();
    const double inv = 1.0 / static_cast<double>(n);
    Tensor out({d});
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < d; ++j) out[j] += M.at(i, j);
    for (std::size_t j = 0; j < d; ++j) out[j] *= inv;
    return push(std::move(out), [m, n, d, inv, self = nodes_.size()](Tape& t) {
        const Tensor& g = t.grad(Var{self});
        Tensor& gm = t.grad_mut(m);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < d; ++j) gm.at(i, j) += g[j] * inv;
    });
}

Var Tape::max_over(const std::vector<Var>& parts) {
    if (parts.empty()) throw ShapeError("max_over: no operands");
    const Tensor& first = value(parts[0]);
    for (Var p : parts)
        if (!value(p).same_shape(first)) shape_mismatch("max_over", first, value(p));
    Tensor out = first;
    std::vector<std::uint32_t> argmax(out.numel(), 0);
    for (std::size_t p = 1; p < parts.size(); ++p) {
        const Tensor& t = value(parts[p]);
        for (std::size_t i = 0; i < out.numel(); ++i) {
            if (t[i] > out[i]) {  // ties keep the earliest operand
                out[i] = t[i];
                argmax[i] = static_cast<std::uint32_t>(p);
            }
        }
    }
    return push(std::move(out), [parts, argmax = std::move(argmax), self = nodes_.size()](Tape& t) {
        const Tensor& g = t.grad(Var{self});
        for (std::size_t i = 0; i < g.numel(); ++i) {
            t.grad_mut(parts[argmax[i]])[i] += g[i];
        }
    });
}

Var Tape::mul(Var a, Var b) {
    const Tensor& A = value(a);
    const Tensor& B = value(b);
    if (!A.same_shape(B)) shape_mismatch("mul", A, B);
    Tensor out = A;
    for (std::size_t i = 0; i < out.numel(); ++i) out[i] *= B[i];
    return push(std::move(out), [a, b, self = nodes_.size()](Tape& t) {
        const Tensor& g = t.grad(Var{self});
        const Tensor& A = t.value(a);
        const Tensor& B = t.value(b);
        Tensor& ga = t.grad_mut(a);
        Tensor& gb = t.grad_mut(b);
        for (std::size_t i = 0; i < g.numel(); ++i) {
            ga[i] += g[i] * B[i];
            gb[i] += g[i] * A[i];
        }
    });
}

Var Tape::scale(Var a, double c) {
    if (!std::isfinite(c)) throw NumericError("scale: non-finite factor");
    Tensor out = value(a);
    for (std::size_t i = 0; i < out.numel(); ++i) out[i] *= c;
    return push(std::move(out), [a, c, self = nodes_.size()](Tape& t) {
        const Tensor& g = t.grad(Var{self});
        Tensor& ga = t.grad_mut(a);
        for (std::size_t i = 0; i < g.numel(); ++i) ga[i] += g[i] * c;
    });
}

Var Tape::sigmoid(Var a) {
    Tensor out = value(a);
    for (std::size_t i = 0; i < out.numel(); ++i) out[i] = stable_sigmoid(out[i]);
    return push(std::move(out), [a, self = nodes_.size()](Tape& t) {
        const Tensor& g = t.grad(Var{self});
        const Tensor& y = t.value(Var{self});
        Tensor& ga = t.grad_mut(a);
        for (std::size_t i = 0; i < g.numel(); ++i) ga[i] += g[i] * y[i] * (1.0 - y[i]);
    });
}

Var Tape::tanh(Var a) {
    Tensor out = value(a);
    for (std::size_t i = 0; i < out.numel(); ++i) out[i] = std::tanh(out[i]);
    return push(std::move(out), [a, self = nodes_.size()](Tape& t) {
        const Tensor& g = t.grad(Var{self});
        const Tensor& y = t.value(Var{self});
        Tensor& ga = t.grad_mut(a);
        for (std::size_t i = 0; i < g.numel(); ++i) ga[i] += g[i] * (1.0 - y[i] * y[i]);
    });
}

Var Tape::log(Var a) {
    Tensor out = value(a);
    for (std::size_t i = 0; i < out.numel(); ++i) out[i] = std::log(out[i]);
    return push(std::move(out), [a, self = nodes_.size()](Tape& t) {
        const Tensor& g = t.grad(Var{self});
        const Tensor& x = t.value(a);
        Tensor& ga = t.grad_mut(a);
        for (std::size_t i = 0; i < g.numel(); ++i) ga[i] += g[i] / x[i];
    });
}

Var Tape::softplus(Var a) {
    Tensor out = value(a);
    for (std::size_t i = 0; i < out.numel(); ++i) {
        const double x = out[i];
        out[i] = std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x)));
    }
    return push(std::move(out), [a, self = nodes_.size()](Tape& t) {
        const Tensor& g = t.grad(Var{self});
        const Tensor& x = t.value(a);
        Tensor& ga = t.grad_mut(a);
        for (std::size_t i = 0; i < g.numel(); ++i) ga[i] += g[i] * stable_sigmoid(x[i]);
    });
}

Var Tape::sum_squares(Var a) {
    const Tensor& A = value(a);
    double s = 0.0;
    for (std::size_t i = 0; i < A.numel(); ++i) s += A[i] * A[i];
    return push(Tensor::scalar(s), [a, self = nodes_.size()](Tape& t) {
        const double g = t.grad(Var{self})[0];
        const Tensor& A = t.value(a);
        Tensor& ga = t.grad_mut(a);
        for (std::size_t i = 0; i < A.numel(); ++i) ga[i] += 2.0 * A[i] * g;
    });
}

void Tape::backward(Var root) {
    if (value(root).numel() != 1) {
        throw NotScalar("backward root has shape " + value(root).shape_str());
    }
    nodes_[root.idx].grad[0] = 1.0;
    for (std::size_t i = root.idx + 1; i-- > 0;) {
        if (nodes_[i].back) nodes_[i].back(*this);
    }
    for (auto& [p, idx] : param_nodes_) {
        Parameter* bound = nodes_[idx].bound;
        const Tensor& g = nodes_[idx].grad;
        for (std::size_t i = 0; i < g.numel(); ++i) bound->grad[i] += g[i];
    }
}

}  // namespace sentord
