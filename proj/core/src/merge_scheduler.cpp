#include "gfrsim/aal5.hpp"
#include "gfrsim/errors.hpp"

namespace gfrsim {

MergeScheduler::MergeScheduler(std::size_t inputs) : queues_(inputs), emitted_(inputs, 0) {
  if (inputs == 0) throw ConfigError("merge: at least one input required");
}

void MergeScheduler::enqueue(std::size_t input, std::shared_ptr<const Frame> frame,
                             VcId out_vc) {
  queues_.at(input).push_back(Queued{std::move(frame), out_vc});
  ++queued_frames_;
}

std::optional<Cell> MergeScheduler::next_cell() {
  if (!current_) {
    if (queued_frames_ == 0) return std::nullopt;
    for (std::size_t k = 0; k < queues_.size(); ++k) {
      std::size_t in = (cursor_ + k) % queues_.size();
      if (queues_[in].empty()) continue;
      current_ = Current{in, std::move(queues_[in].front()), 0};
      queues_[in].pop_front();
      --queued_frames_;
      cursor_ = (in + 1) % queues_.size();
      break;
    }
  }
  Current& cur = *current_;
  Cell c;
  c.vc = cur.item.out_vc;
  c.index = cur.next_index++;
  c.eom = c.index + 1 == cur.item.frame->cell_count;
  c.frame = cur.item.frame;
  if (c.eom) {
    ++emitted_[cur.input];
    current_.reset();
  }
  return c;
}

}  // namespace gfrsim
