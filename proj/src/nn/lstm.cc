#include "zsp/nn/lstm.h"

#include "zsp/errors.h"

namespace zsp::nn {

LstmCell::LstmCell(ParamStore& store, const std::string& prefix, int in,
                   int hid)
    : input(in), hidden(hid) {
  w = store.add(prefix + ".W", 4 * hid, in + hid);
  b = store.add(prefix + ".b", 4 * hid);
}

void LstmCell::init(Rng& rng, double scale) const {
  fillUniform(w->value, rng, scale);
  b->value.setZero();
  b->value.block(hidden, 0, hidden, 1).setOnes();
}

LstmState zeroState(int hidden) {
  return {Vec::Zero(hidden), Vec::Zero(hidden)};
}

LstmState lstmStep(const LstmCell& cell, const Vec& x, const LstmState& s,
                   LstmCache* cache) {
  const int H = cell.hidden;
  if (x.size() != cell.input || s.h.size() != H || s.c.size() != H) {
    throw DimMismatch("lstm step: input " + std::to_string(x.size()) +
                      " vs " + std::to_string(cell.input) + ", state " +
                      std::to_string(s.h.size()) + " vs " + std::to_string(H));
  }
  Vec xh(cell.input + H);
  xh << x, s.h;
  Vec z = cell.w->value * xh + cell.b->value.col(0);
  Vec i = z.segment(0, H).unaryExpr(&sigmoid);
  Vec f = z.segment(H, H).unaryExpr(&sigmoid);
  Vec g = z.segment(2 * H, H).array().tanh().matrix();
  Vec o = z.segment(3 * H, H).unaryExpr(&sigmoid);
  LstmState out;
  out.c = f.cwiseProduct(s.c) + i.cwiseProduct(g);
  Vec tanhC = out.c.array().tanh().matrix();
  out.h = o.cwiseProduct(tanhC);
  if (cache) {
    cache->xh = std::move(xh);
    cache->i = std::move(i);
    cache->f = std::move(f);
    cache->g = std::move(g);
    cache->o = std::move(o);
    cache->cPrev = s.c;
    cache->tanhC = std::move(tanhC);
  }
  return out;
}

void lstmBackward(const LstmCell& cell, const LstmCache& k, const Vec& dh,
                  const Vec& dc, Vec* dx, Vec* dhPrev, Vec* dcPrev) {
  const int H = cell.hidden;
  Vec dcTotal = dc + dh.cwiseProduct(k.o).cwiseProduct(
                         (1 - k.tanhC.array().square()).matrix());
  Vec dz(4 * H);
  dz.segment(0, H) = (dcTotal.array() * k.g.array() * k.i.array() *
                      (1 - k.i.array()))
                         .matrix();
  dz.segment(H, H) = (dcTotal.array() * k.cPrev.array() * k.f.array() *
                      (1 - k.f.array()))
                         .matrix();
  dz.segment(2 * H, H) =
      (dcTotal.array() * k.i.array() * (1 - k.g.array().square())).matrix();
  dz.segment(3 * H, H) = (dh.array() * k.tanhC.array() * k.o.array() *
                          (1 - k.o.array()))
                             .matrix();
  cell.w->grad.noalias() += dz * k.xh.transpose();
  cell.b->grad.col(0) += dz;
  Vec dxh = cell.w->value.transpose() * dz;
  if (dx) *dx = dxh.head(cell.input);
  if (dhPrev) *dhPrev = dxh.tail(H);
  if (dcPrev) *dcPrev = dcTotal.cwiseProduct(k.f);
}

BiLstm::BiLstm(ParamStore& store, const std::string& prefix, int input,
               int hidden)
    : fwd(store, prefix + ".fwd", input, hidden),
      bwd(store, prefix + ".bwd", input, hidden) {}

void BiLstm::init(Rng& rng, double scale) const {
  fwd.init(rng, scale);
  bwd.init(rng, scale);
}

std::vector<Vec> biLstmEncode(const BiLstm& net, const std::vector<Vec>& inputs,
                              BiLstmTrace* trace) {
  const std::size_t m = inputs.size();
  if (m == 0) throw EmptyInput("bilstm over an empty sequence");
  const int H = net.fwd.hidden;
  std::vector<Vec> out(m, Vec(2 * H));
  if (trace) {
    trace->fwd.assign(m, {});
    trace->bwd.assign(m, {});
  }
  LstmState s = zeroState(H);
  for (std::size_t k = 0; k < m; ++k) {
    s = lstmStep(net.fwd, inputs[k], s, trace ? &trace->fwd[k] : nullptr);
    out[k].head(H) = s.h;
  }
  s = zeroState(net.bwd.hidden);
  for (std::size_t k = m; k-- > 0;) {
    s = lstmStep(net.bwd, inputs[k], s, trace ? &trace->bwd[k] : nullptr);
    out[k].tail(H) = s.h;
  }
  return out;
}

std::vector<Vec> biLstmBackward(const BiLstm& net, const BiLstmTrace& trace,
                                const std::vector<Vec>& dStates) {
  const std::size_t m = dStates.size();
  const int H = net.fwd.hidden;
  std::vector<Vec> dInputs(m, Vec::Zero(net.fwd.input));
  Vec dh = Vec::Zero(H), dc = Vec::Zero(H), dx;
  for (std::size_t k = m; k-- > 0;) {
    Vec dhk = dh + dStates[k].head(H);
    lstmBackward(net.fwd, trace.fwd[k], dhk, dc, &dx, &dh, &dc);
    dInputs[k] += dx;
  }
  dh.setZero();
  dc.setZero();
  for (std::size_t k = 0; k < m; ++k) {
    Vec dhk = dh + dStates[k].tail(H);
    lstmBackward(net.bwd, trace.bwd[k], dhk, dc, &dx, &dh, &dc);
    dInputs[k] += dx;
  }
  return dInputs;
}

}  // namespace zsp::nn
