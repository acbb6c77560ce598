// Opt-in downloader for the four MNIST IDX files: fetches the published .gz
// archives, verifies their well-known MD5 checksums, and decompresses them
// into --out. Built only when zlib is available; https requires OpenSSL.

#include <array>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <zlib.h>

#include "httplib.h"

namespace {

// ---- MD5 (RFC 1321) ----

struct Md5 {
    std::uint32_t a = 0x67452301, b = 0xefcdab89, c = 0x98badcfe, d = 0x10325476;
    std::uint64_t length = 0;
    unsigned char block[64];
    std::size_t fill = 0;

    static std::uint32_t rotl(std::uint32_t x, int s) { return (x << s) | (x >> (32 - s)); }

    void compress(const unsigned char* p) {
        static const std::uint32_t K[64] = {
            0xd76aa478, 0xe8c7b756, 0x242070db, 0xc1bdceee, 0xf57c0faf, 0x4787c62a, 0xa8304613,
            0xfd469501, 0x698098d8, 0x8b44f7af, 0xffff5bb1, 0x895cd7be, 0x6b901122, 0xfd987193,
            0xa679438e, 0x49b40821, 0xf61e2562, 0xc040b340, 0x265e5a51, 0xe9b6c7aa, 0xd62f105d,
            0x02441453, 0xd8a1e681, 0xe7d3fbc8, 0x21e1cde6, 0xc33707d6, 0xf4d50d87, 0x455a14ed,
            0xa9e3e905, 0xfcefa3f8, 0x676f02d9, 0x8d2a4c8a, 0xfffa3942, 0x8771f681, 0x6d9d6122,
            0xfde5380c, 0xa4beea44, 0x4bdecfa9, 0xf6bb4b60, 0xbebfbc70, 0x289b7ec6, 0xeaa127fa,
            0xd4ef3085, 0x04881d05, 0xd9d4d039, 0xe6db99e5, 0x1fa27cf8, 0xc4ac5665, 0xf4292244,
            0x432aff97, 0xab9423a7, 0xfc93a039, 0x655b59c3, 0x8f0ccc92, 0xffeff47d, 0x85845dd1,
            0x6fa87e4f, 0xfe2ce6e0, 0xa3014314, 0x4e0811a1, 0xf7537e82, 0xbd3af235, 0x2ad7d2bb,
            0xeb86d391};
        static const int S[64] = {7, 12, 17, 22, 7, 12, 17, 22, 7, 12, 17, 22, 7, 12, 17, 22,
                                  5, 9,  14, 20, 5, 9,  14, 20, 5, 9,  14, 20, 5, 9,  14, 20,
                                  4, 11, 16, 23, 4, 11, 16, 23, 4, 11, 16, 23, 4, 11, 16, 23,
                                  6, 10, 15, 21, 6, 10, 15, 21, 6, 10, 15, 21, 6, 10, 15, 21};
        std::uint32_t m[16];
        for (int i = 0; i < 16; ++i)
            m[i] = std::uint32_t(p[4 * i]) | (std::uint32_t(p[4 * i + 1]) << 8) |
                   (std::uint32_t(p[4 * i + 2]) << 16) | (std::uint32_t(p[4 * i + 3]) << 24);
        std::uint32_t A = a, B = b, C = c, D = d;
        for (int i = 0; i < 64; ++i) {
            std::uint32_t f;
            int g;
            if (i < 16) { f = (B & C) | (~B & D); g = i; }
            else if (i < 32) { f = (D & B) | (~D & C); g = (5 * i + 1) % 16; }
            else if (i < 48) { f = B ^ C ^ D; g = (3 * i + 5) % 16; }
            else { f = C ^ (B | ~D); g = (7 * i) % 16; }
            const std::uint32_t tmp = D;
            D = C;
            C = B;
            B = B + rotl(A + f + K[i] + m[g], S[i]);
            A = tmp;
        }
        a += A; b += B; c += C; d += D;
    }

    void update(const unsigned char* p, std::size_t n) {
        length += n;
        while (n > 0) {
            const std::size_t take = std::min(n, std::size_t(64) - fill);
            std::memcpy(block + fill, p, take);
            fill += take;
            p += take;
            n -= take;
            if (fill == 64) {
                compress(block);
                fill = 0;
            }
        }
    }

    std::string hex_digest() {
        const std::uint64_t bits = length * 8;
        const unsigned char pad = 0x80;
        update(&pad, 1);
        const unsigned char zero = 0;
        while (fill != 56) update(&zero, 1);
        unsigned char len[8];
        for (int i = 0; i < 8; ++i) len[i] = (unsigned char)(bits >> (8 * i));
        update(len, 8);
        char out[33];
        const std::uint32_t regs[4] = {a, b, c, d};
        for (int r = 0; r < 4; ++r)
            for (int i = 0; i < 4; ++i)
                std::snprintf(out + 8 * r + 2 * i, 3, "%02x", (regs[r] >> (8 * i)) & 0xff);
        return std::string(out, 32);
    }
};

std::string md5_hex(const std::string& bytes) {
    Md5 h;
    h.update(reinterpret_cast<const unsigned char*>(bytes.data()), bytes.size());
    return h.hex_digest();
}

std::string gunzip(const std::string& gz) {
    z_stream strm{};
    if (inflateInit2(&strm, 16 + MAX_WBITS) != Z_OK) throw std::runtime_error("inflateInit2 failed");
    std::string out;
    std::vector<unsigned char> buf(1 << 16);
    strm.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(gz.data()));
    strm.avail_in = uInt(gz.size());
    int rc = Z_OK;
    while (rc != Z_STREAM_END) {
        strm.next_out = buf.data();
        strm.avail_out = uInt(buf.size());
        rc = inflate(&strm, Z_NO_FLUSH);
        if (rc != Z_OK && rc != Z_STREAM_END) {
            inflateEnd(&strm);
            throw std::runtime_error("gzip decompression failed");
        }
        out.append(reinterpret_cast<char*>(buf.data()), buf.size() - strm.avail_out);
    }
    inflateEnd(&strm);
    return out;
}

struct MnistFile {
    const char* gz_name;
    const char* out_name;
    const char* md5;
};

constexpr MnistFile kFiles[] = {
    {"train-images-idx3-ubyte.gz", "train-images-idx3-ubyte", "f68b3c2dcbeaaa9fbdd348bbdeb94873"},
    {"train-labels-idx1-ubyte.gz", "train-labels-idx1-ubyte", "d53e105ee54ea40749a09fcbcd1e9432"},
    {"t10k-images-idx3-ubyte.gz", "t10k-images-idx3-ubyte", "9fb629c4189551a2d022fa330f9573f3"},
    {"t10k-labels-idx1-ubyte.gz", "t10k-labels-idx1-ubyte", "ec29112dd5afa0611ce80d1b7f02629c"},
};

constexpr const char* kHost = "ossci-datasets.s3.amazonaws.com";

}  // namespace

int fetch_mnist_main(const std::string& out_dir, bool insecure_http) {
    std::filesystem::create_directories(out_dir);
    const std::string base = "/mnist/";

    auto get = [&](const std::string& path) -> std::string {
#ifdef CPPHTTPLIB_OPENSSL_SUPPORT
        if (!insecure_http) {
            httplib::SSLClient cli(kHost, 443);
            cli.set_read_timeout(120);
            auto res = cli.Get(path);
            if (!res || res->status != 200)
                throw std::runtime_error("download failed: https://" + std::string(kHost) + path);
            return res->body;
        }
#endif
        httplib::Client cli(kHost, 80);
        cli.set_read_timeout(120);
        auto res = cli.Get(path);
        if (!res || res->status != 200)
            throw std::runtime_error("download failed: http://" + std::string(kHost) + path);
        return res->body;
    };

    for (const MnistFile& f : kFiles) {
        const auto target = std::filesystem::path(out_dir) / f.out_name;
        if (std::filesystem::exists(target)) {
            std::printf("%s already present, skipping\n", f.out_name);
            continue;
        }
        std::printf("fetching %s ...\n", f.gz_name);
        const std::string gz = get(base + f.gz_name);
        const std::string digest = md5_hex(gz);
        if (digest != f.md5) {
            std::fprintf(stderr, "checksum mismatch for %s: got %s want %s\n", f.gz_name,
                         digest.c_str(), f.md5);
            return 1;
        }
        const std::string raw = gunzip(gz);
        std::ofstream out(target, std::ios::binary);
        out.write(raw.data(), std::streamsize(raw.size()));
        if (!out) {
            std::fprintf(stderr, "write failed for %s\n", target.string().c_str());
            return 1;
        }
        std::printf("  ok: %s (%zu bytes, md5 verified)\n", f.out_name, raw.size());
    }
    std::printf("MNIST files ready under %s\n", out_dir.c_str());
    return 0;
}

#ifdef SASQ_FETCH_SELFTEST
// Tiny self-check used during development: md5 test vectors + a gzip round trip.
int main() {
    if (md5_hex("") != "d41d8cd98f00b204e9800998ecf8427e") return 1;
    if (md5_hex("abc") != "900150983cd24fb0d6963f7d28e17f72") return 1;
    if (md5_hex("The quick brown fox jumps over the lazy dog") !=
        "9e107d9d372bb6826bd81d3542a419d6")
        return 1;
    std::string payload(100000, 'x');
    for (std::size_t i = 0; i < payload.size(); ++i) payload[i] = char('a' + i % 23);
    std::string gz;
    {
        z_stream strm{};
        deflateInit2(&strm, Z_BEST_COMPRESSION, Z_DEFLATED, 16 + MAX_WBITS, 8, Z_DEFAULT_STRATEGY);
        gz.resize(payload.size() + 1024);
        strm.next_in = reinterpret_cast<Bytef*>(payload.data());
        strm.avail_in = uInt(payload.size());
        strm.next_out = reinterpret_cast<Bytef*>(gz.data());
        strm.avail_out = uInt(gz.size());
        deflate(&strm, Z_FINISH);
        gz.resize(gz.size() - strm.avail_out);
        deflateEnd(&strm);
    }
    if (gunzip(gz) != payload) return 1;
    std::puts("fetch selftest ok");
    return 0;
}
#endif
