#include "pfvc/errors.hpp"

namespace pfvc {

namespace {

std::string describe(const std::string& what, std::size_t offset,
                     std::optional<std::size_t> record) {
  std::string msg = what + " (offset " + std::to_string(offset);
  if (record) msg += ", record " + std::to_string(*record);
  return msg + ")";
}

}  // namespace

CorruptStream::CorruptStream(const std::string& what, std::size_t offset,
                             std::optional<std::size_t> record)
    : Error(describe(what, offset, record)), detail_(what), offset_(offset), record_(record) {}

}  // namespace pfvc
