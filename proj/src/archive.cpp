#include "residua/archive.hpp"

#include <zlib.h>

#include <cstring>
#include <fstream>

namespace residua {

bool looks_like_gzip(std::string_view d) {
    return d.size() >= 2 && static_cast<unsigned char>(d[0]) == 0x1f &&
           static_cast<unsigned char>(d[1]) == 0x8b;
}

bool looks_like_pdf(std::string_view d) {
    return d.size() >= 4 && d.compare(0, 4, "%PDF") == 0;
}

bool looks_like_tar(std::string_view d) {
    return d.size() >= 262 && d.compare(257, 5, "ustar") == 0;
}

bool looks_like_zip(std::string_view d) {
    return d.size() >= 4 && d[0] == 'P' && d[1] == 'K' && d[2] == '\x03' && d[3] == '\x04';
}

GzipResult gzip_decompress(std::string_view raw, size_t max_output) {
    GzipResult res;
    if (!looks_like_gzip(raw)) {
        res.error = "not a gzip stream";
        return res;
    }
    z_stream strm{};
    if (inflateInit2(&strm, 16 + MAX_WBITS) != Z_OK) {
        res.error = "inflateInit2 failed";
        return res;
    }
    gz_header hdr{};
    char name_buf[512] = {0};
    hdr.name = reinterpret_cast<Bytef*>(name_buf);
    hdr.name_max = sizeof(name_buf) - 1;
    inflateGetHeader(&strm, &hdr);

    strm.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(raw.data()));
    strm.avail_in = static_cast<uInt>(raw.size());

    std::string out;
    char chunk[1 << 16];
    int rc = Z_OK;
    while (rc != Z_STREAM_END) {
        strm.next_out = reinterpret_cast<Bytef*>(chunk);
        strm.avail_out = sizeof(chunk);
        rc = inflate(&strm, Z_NO_FLUSH);
        if (rc != Z_OK && rc != Z_STREAM_END && rc != Z_BUF_ERROR) {
            res.error = strm.msg ? strm.msg : "corrupt gzip data";
            inflateEnd(&strm);
            return res;
        }
        out.append(chunk, sizeof(chunk) - strm.avail_out);
        if (out.size() > max_output) {
            res.error = "decompressed size limit exceeded";
            inflateEnd(&strm);
            return res;
        }
        if (rc == Z_BUF_ERROR && strm.avail_in == 0) {
            res.error = "truncated gzip stream";
            inflateEnd(&strm);
            return res;
        }
    }
    res.trailing_members = strm.avail_in > 0;
    inflateEnd(&strm);
    if (hdr.done == 1 && name_buf[0] != '\0') res.member_name = name_buf;
    res.ok = true;
    res.data = std::move(out);
    return res;
}

std::string gzip_compress(std::string_view data, const std::string& member_name) {
    z_stream strm{};
    deflateInit2(&strm, Z_DEFAULT_COMPRESSION, Z_DEFLATED, 16 + MAX_WBITS, 8,
                 Z_DEFAULT_STRATEGY);
    gz_header hdr{};
    std::string name_copy = member_name;
    if (!name_copy.empty())
        hdr.name = reinterpret_cast<Bytef*>(name_copy.data());
    hdr.os = 3;
    deflateSetHeader(&strm, &hdr);

    std::string out;
    out.resize(deflateBound(&strm, static_cast<uLong>(data.size())) + 64);
    strm.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(data.data()));
    strm.avail_in = static_cast<uInt>(data.size());
    strm.next_out = reinterpret_cast<Bytef*>(out.data());
    strm.avail_out = static_cast<uInt>(out.size());
    int rc = deflate(&strm, Z_FINISH);
    (void)rc;
    out.resize(out.size() - strm.avail_out);
    deflateEnd(&strm);
    return out;
}

namespace {

constexpr size_t kBlock = 512;

struct RawHeader {
    char name[100];
    char mode[8];
    char uid[8];
    char gid[8];
    char size[12];
    char mtime[12];
    char chksum[8];
    char typeflag;
    char linkname[100];
    char magic[6];
    char version[2];
    char uname[32];
    char gname[32];
    char devmajor[8];
    char devminor[8];
    char prefix[155];
    char pad[12];
};
static_assert(sizeof(RawHeader) == kBlock, "tar header must be one block");

bool all_zero(const char* p, size_t n) {
    for (size_t i = 0; i < n; ++i)
        if (p[i] != 0) return false;
    return true;
}

// Octal field with optional GNU base-256 encoding.
std::optional<uint64_t> parse_numeric(const char* p, size_t n) {
    if (n && (static_cast<unsigned char>(p[0]) & 0x80)) {
        uint64_t v = static_cast<unsigned char>(p[0]) & 0x7f;
        for (size_t i = 1; i < n; ++i) v = (v << 8) | static_cast<unsigned char>(p[i]);
        return v;
    }
    uint64_t v = 0;
    bool seen = false;
    for (size_t i = 0; i < n; ++i) {
        char c = p[i];
        if (c == ' ' || c == '\0') {
            if (seen) break;
            continue;
        }
        if (c < '0' || c > '7') return std::nullopt;
        v = v * 8 + static_cast<uint64_t>(c - '0');
        seen = true;
    }
    if (!seen) return 0;
    return v;
}

bool checksum_ok(const RawHeader& h) {
    auto want = parse_numeric(h.chksum, sizeof(h.chksum));
    if (!want) return false;
    const unsigned char* raw = reinterpret_cast<const unsigned char*>(&h);
    uint64_t sum = 0;
    for (size_t i = 0; i < kBlock; ++i) {
        if (i >= offsetof(RawHeader, chksum) && i < offsetof(RawHeader, chksum) + 8)
            sum += ' ';
        else
            sum += raw[i];
    }
    return sum == *want;
}

std::string field_str(const char* p, size_t n) {
    size_t len = 0;
    while (len < n && p[len] != '\0') ++len;
    return std::string(p, len);
}

// Parses "len key=value\n" records from a pax extended header block.
std::optional<std::string> pax_path_override(std::string_view data) {
    size_t i = 0;
    std::optional<std::string> path;
    while (i < data.size()) {
        size_t sp = data.find(' ', i);
        if (sp == std::string_view::npos) break;
        uint64_t len = 0;
        bool digits = false;
        for (size_t k = i; k < sp; ++k) {
            if (data[k] < '0' || data[k] > '9') { digits = false; break; }
            len = len * 10 + static_cast<uint64_t>(data[k] - '0');
            digits = true;
        }
        if (!digits || len == 0 || i + len > data.size()) break;
        std::string_view rec = data.substr(sp + 1, i + len - sp - 2);
        size_t eq = rec.find('=');
        if (eq != std::string_view::npos && rec.substr(0, eq) == "path")
            path = std::string(rec.substr(eq + 1));
        i += len;
    }
    return path;
}

// Shared header-walking loop. read_block must fill exactly kBlock bytes or
// return false; read_data consumes `size` payload bytes (rounded up to
// blocks) and optionally captures them.
template <typename ReadBlock, typename ReadData>
TarReadResult walk_tar(ReadBlock&& read_block, ReadData&& read_data) {
    TarReadResult res;
    std::optional<std::string> longname;
    std::optional<std::string> pax_path;
    uint64_t offset = 0;

    char block[kBlock];
    while (true) {
        if (!read_block(block)) {
            // EOF at a header boundary without the terminator blocks is
            // tolerated; mid-archive truncation is not.
            res.ok = true;
            return res;
        }
        offset += kBlock;
        RawHeader h;
        std::memcpy(&h, block, kBlock);
        if (all_zero(block, kBlock)) {
            res.ok = true;
            return res;
        }
        if (std::strncmp(h.magic, "ustar", 5) != 0 || !checksum_ok(h)) {
            res.error = "bad tar header at offset " + std::to_string(offset - kBlock);
            return res;
        }
        auto size = parse_numeric(h.size, sizeof(h.size));
        if (!size) {
            res.error = "bad size field at offset " + std::to_string(offset - kBlock);
            return res;
        }

        std::string name = field_str(h.name, sizeof(h.name));
        std::string prefix = field_str(h.prefix, sizeof(h.prefix));
        if (!prefix.empty()) name = prefix + "/" + name;
        if (longname) {
            name = *longname;
            longname.reset();
        }
        if (pax_path && h.typeflag != 'x' && h.typeflag != 'g' && h.typeflag != 'L') {
            name = *pax_path;
            pax_path.reset();
        }

        std::string payload;
        bool want_payload =
            h.typeflag == 'x' || h.typeflag == 'L' || h.typeflag == '0' ||
            h.typeflag == '\0' || h.typeflag == '7';
        if (!read_data(*size, want_payload ? &payload : nullptr, offset)) {
            res.error = "truncated member '" + name + "' (expected " +
                        std::to_string(*size) + " bytes)";
            return res;
        }
        uint64_t data_offset = offset;
        offset += (*size + kBlock - 1) / kBlock * kBlock;

        switch (h.typeflag) {
            case 'L':  // GNU long name for the next entry
                longname = field_str(payload.data(), payload.size());
                break;
            case 'x':  // pax extended header for the next entry
                if (auto p = pax_path_override(payload)) pax_path = p;
                break;
            case 'g':  // pax global header: skipped
                break;
            case '0':
            case '\0':
            case '7': {
                TarEntry e;
                e.path = name;
                e.type = TarEntryType::File;
                e.size = *size;
                e.data_offset = data_offset;
                e.data = std::move(payload);
                res.entries.push_back(std::move(e));
                break;
            }
            case '5': {
                TarEntry e;
                e.path = name;
                e.type = TarEntryType::Directory;
                res.entries.push_back(std::move(e));
                break;
            }
            case '1':
            case '2':
                res.notes.push_back("skipped link member '" + name + "'");
                break;
            default:
                res.notes.push_back("skipped member '" + name + "' with typeflag '" +
                                    std::string(1, h.typeflag) + "'");
                break;
        }
    }
}

}  // namespace

TarReadResult list_tar_entries(std::string_view tar) {
    size_t pos = 0;
    auto read_block = [&](char* out) {
        if (pos + kBlock > tar.size()) return false;
        std::memcpy(out, tar.data() + pos, kBlock);
        pos += kBlock;
        return true;
    };
    auto read_data = [&](uint64_t size, std::string* capture, uint64_t) {
        uint64_t padded = (size + kBlock - 1) / kBlock * kBlock;
        if (pos + size > tar.size()) return false;
        if (capture) capture->assign(tar.data() + pos, size);
        pos += std::min<uint64_t>(padded, tar.size() - pos);
        return true;
    };
    return walk_tar(read_block, read_data);
}

TarReadResult index_tar_file(const std::string& tar_path) {
    std::ifstream in(tar_path, std::ios::binary);
    if (!in) {
        TarReadResult res;
        res.error = "cannot open " + tar_path;
        return res;
    }
    auto read_block = [&](char* out) {
        in.read(out, kBlock);
        return in.gcount() == static_cast<std::streamsize>(kBlock);
    };
    auto read_data = [&](uint64_t size, std::string* capture, uint64_t) {
        uint64_t padded = (size + kBlock - 1) / kBlock * kBlock;
        if (capture && (
                // Header-chain members (pax/longname) stay small; data for
                // regular files is not materialized during indexing.
                size <= (1u << 20))) {
            capture->resize(size);
            in.read(capture->data(), static_cast<std::streamsize>(size));
            if (in.gcount() != static_cast<std::streamsize>(size)) return false;
            in.seekg(static_cast<std::streamoff>(padded - size), std::ios::cur);
        } else {
            if (capture) capture->clear();
            in.seekg(static_cast<std::streamoff>(padded), std::ios::cur);
        }
        // seekg past EOF only fails on the next read; probe explicitly.
        auto here = in.tellg();
        in.seekg(0, std::ios::end);
        auto end = in.tellg();
        if (here < 0 || here > end) return false;
        in.seekg(here);
        return true;
    };
    auto res = walk_tar(read_block, read_data);
    // Indexing must not hand out captured payloads for regular files: the
    // contract is offset+size only.
    for (auto& e : res.entries) e.data.clear();
    return res;
}

std::optional<std::string> read_tar_member(const std::string& tar_path,
                                           const TarEntry& entry) {
    std::ifstream in(tar_path, std::ios::binary);
    if (!in) return std::nullopt;
    in.seekg(static_cast<std::streamoff>(entry.data_offset));
    std::string out;
    out.resize(entry.size);
    in.read(out.data(), static_cast<std::streamsize>(entry.size));
    if (in.gcount() != static_cast<std::streamsize>(entry.size)) return std::nullopt;
    return out;
}

namespace {

void write_octal(char* field, size_t n, uint64_t v) {
    // n-1 digits plus NUL terminator.
    for (size_t i = n - 1; i-- > 0;) {
        field[i] = static_cast<char>('0' + (v & 7));
        v >>= 3;
    }
    field[n - 1] = '\0';
}

std::string make_header(const std::string& name, char typeflag, uint64_t size) {
    RawHeader h;
    std::memset(&h, 0, sizeof(h));
    std::snprintf(h.name, sizeof(h.name), "%s", name.c_str());
    write_octal(h.mode, sizeof(h.mode), typeflag == '5' ? 0755 : 0644);
    write_octal(h.uid, sizeof(h.uid), 0);
    write_octal(h.gid, sizeof(h.gid), 0);
    write_octal(h.size, sizeof(h.size), size);
    write_octal(h.mtime, sizeof(h.mtime), 0);
    h.typeflag = typeflag;
    std::memcpy(h.magic, "ustar", 6);
    h.version[0] = '0';
    h.version[1] = '0';
    std::memset(h.chksum, ' ', sizeof(h.chksum));
    const unsigned char* raw = reinterpret_cast<const unsigned char*>(&h);
    uint64_t sum = 0;
    for (size_t i = 0; i < kBlock; ++i) sum += raw[i];
    std::snprintf(h.chksum, sizeof(h.chksum), "%06lo", static_cast<unsigned long>(sum));
    h.chksum[7] = ' ';
    return std::string(reinterpret_cast<const char*>(&h), kBlock);
}

}  // namespace

void TarWriter::add_file(const std::string& path, std::string_view data) {
    add_raw(path, '0', data);
}

void TarWriter::add_dir(const std::string& path) {
    std::string p = path;
    if (p.empty() || p.back() != '/') p.push_back('/');
    buf_ += make_header(p, '5', 0);
}

void TarWriter::add_raw(const std::string& name, char typeflag, std::string_view data) {
    if (name.size() >= 100) {
        // GNU longname chain keeps the writer usable for deep test trees.
        std::string ln(name);
        ln.push_back('\0');
        buf_ += make_header("././@LongLink", 'L', ln.size());
        buf_.append(ln);
        if (ln.size() % kBlock) buf_.append(kBlock - ln.size() % kBlock, '\0');
        buf_ += make_header(name.substr(0, 99), typeflag, data.size());
    } else {
        buf_ += make_header(name, typeflag, data.size());
    }
    buf_.append(data);
    if (data.size() % kBlock) buf_.append(kBlock - data.size() % kBlock, '\0');
}

std::string TarWriter::finish() {
    std::string out = std::move(buf_);
    buf_.clear();
    out.append(2 * kBlock, '\0');
    return out;
}

}  // namespace residua
