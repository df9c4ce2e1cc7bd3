// bytes.cpp

#include "vpnscan/bytes.hpp"

#include <cctype>
#include <fstream>
#include <stdexcept>

namespace vpnscan {

static const char* kHexDigits = "0123456789abcdef";

std::string to_hex(ByteView b) {
    std::string out;
    out.reserve(b.size() * 2);
    for (uint8_t v : b) {
        out.push_back(kHexDigits[v >> 4]);
        out.push_back(kHexDigits[v & 0xf]);
    }
    return out;
}

static int hex_nibble(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

Bytes from_hex(std::string_view hex) {
    if (hex.size() % 2 != 0) throw std::invalid_argument("odd hex length");
    Bytes out;
    out.reserve(hex.size() / 2);
    for (size_t i = 0; i < hex.size(); i += 2) {
        int hi = hex_nibble(hex[i]);
        int lo = hex_nibble(hex[i + 1]);
        if (hi < 0 || lo < 0) throw std::invalid_argument("bad hex digit");
        out.push_back(static_cast<uint8_t>(hi << 4 | lo));
    }
    return out;
}

Bytes load_hex_fixture(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open fixture: " + path);
    Bytes out;
    std::string line;
    while (std::getline(in, line)) {
        if (auto pos = line.find('#'); pos != std::string::npos) line.resize(pos);
        std::string tok;
        for (char c : line) {
            if (std::isspace(static_cast<unsigned char>(c))) {
                if (!tok.empty()) {
                    Bytes b = from_hex(tok);
                    out.insert(out.end(), b.begin(), b.end());
                    tok.clear();
                }
            } else {
                tok.push_back(c);
            }
        }
        if (!tok.empty()) {
            Bytes b = from_hex(tok);
            out.insert(out.end(), b.begin(), b.end());
        }
    }
    return out;
}

}  // namespace vpnscan
