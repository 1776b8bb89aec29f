#pragma once

#include <optional>
#include <string>
#include <vector>

#include "residua/submission.hpp"

namespace residua {

// Reference to one per-submission corpus entry; bytes load on demand so
// scanning stays cheap and workers read independently.
struct CorpusEntryRef {
    std::string chunk_path;  // "" for a loose file
    std::string loose_path;  // set when chunk_path is ""
    std::string entry_name;  // filename of the entry (basename)
    SubmissionId id;
    uint64_t offset = 0;  // data offset inside the chunk
    uint64_t size = 0;

    // Loads the compressed payload; empty optional on I/O failure.
    std::optional<std::string> load() const;
};

struct ScanResult {
    // Conforming entries ("YYMM.XXXXX.pdf" / "YYMM.XXXXX.gz"), ordered by
    // container filename then entry name; byte-identical across runs.
    std::vector<CorpusEntryRef> entries;
    // Files or members seen but not per-submission entries (reported, never
    // silently dropped).
    std::vector<std::string> irregular;
    // Unreadable or corrupt containers, with the parse error.
    std::vector<std::string> errors;
};

// Walks a corpus directory of chunk archives (*.tar) and loose per-submission
// files. A corrupt chunk contributes its parseable prefix of members plus one
// error record; scanning continues with the next chunk.
ScanResult scan_corpus(const std::string& corpus_dir);

struct Classification {
    SubmissionKind kind = SubmissionKind::UnrecognizedType;
    std::string note;        // detail for excluded kinds
    std::string inner_name;  // gzip member name (header field or ID fallback)
    std::string inner_data;  // TeX source for SingleTex, archive bytes for ProjectBlob
};

// Decides the submission kind from the raw payload. Never throws; every
// undecodable input maps to UnrecognizedType with a note.
Classification classify_submission(const RawSubmission& raw);

struct UnpackResult {
    bool ok = false;
    std::string error;  // set when the blob is refused (corrupt, traversal)
    std::vector<std::string> notes;
    size_t file_count = 0;
};

// Extracts a project blob (tar) into dest_dir. Member paths are normalized
// ('\'->'/', "./" stripped); absolute paths or any ".." component refuse the
// whole blob so nothing can land outside dest_dir.
UnpackResult unpack_blob(const std::string& tar_bytes, const std::string& dest_dir);

}  // namespace residua
