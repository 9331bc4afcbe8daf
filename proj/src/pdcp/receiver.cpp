#include "hrrm/pdcp/receiver.hpp"

namespace hrrm::pdcp {

namespace {

void release_run(ReceiverState& rx, std::vector<Pdu>& out) {
  auto it = rx.buffer.begin();
  while (it != rx.buffer.end() && it->first == rx.expected_sn) {
    out.push_back(it->second);
    ++rx.delivered;
    ++rx.expected_sn;
    it = rx.buffer.erase(it);
  }
}

}  // namespace

std::vector<Pdu> reorder_deliver(ReceiverState& rx, const Pdu& pdu, std::uint64_t now) {
  std::vector<Pdu> out;
  if (pdu.sn < rx.expected_sn || rx.buffer.contains(pdu.sn)) {
    ++rx.duplicates;
    return out;
  }
  if (pdu.sn == rx.expected_sn) {
    out.push_back(pdu);
    ++rx.delivered;
    ++rx.expected_sn;
    release_run(rx, out);
    if (rx.buffer.empty()) {
      rx.timer_started.reset();
    } else {
      rx.timer_started = now;
    }
    return out;
  }
  rx.buffer.emplace(pdu.sn, pdu);
  if (!rx.timer_started) rx.timer_started = now;
  return out;
}

std::vector<Pdu> expire_reorder_timer(ReceiverState& rx, std::uint64_t now) {
  std::vector<Pdu> out;
  if (!rx.timer_started || rx.buffer.empty()) return out;
  if (now < *rx.timer_started + rx.t_reorder) return out;
  const std::uint32_t first = rx.buffer.begin()->first;
  rx.lost += first - rx.expected_sn;
  rx.expected_sn = first;
  release_run(rx, out);
  if (rx.buffer.empty()) {
    rx.timer_started.reset();
  } else {
    rx.timer_started = now;
  }
  return out;
}

}  // namespace hrrm::pdcp
