#include "io_util.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "esn/errors.hpp"

namespace esn::detail {

void atomic_write(const std::string& path, const std::function<void(std::ostream&)>& produce) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw Error("cannot open " + tmp.string() + " for writing");
        }
        produce(out);
        out.flush();
        if (!out) {
            std::error_code ec;
            fs::remove(tmp, ec);
            throw Error("write failed for " + tmp.string());
        }
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw Error("cannot rename " + tmp.string() + " to " + target.string());
    }
}

}  // namespace esn::detail
