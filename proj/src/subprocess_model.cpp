#include "langbench/subprocess_model.hpp"

#include <sys/types.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstdio>
#include <cstring>
#include <istream>
#include <ostream>
#include <vector>

namespace langbench {

namespace {

// Bidirectional pipe to a child running `/bin/sh -c command`.
class ChildProcess {
public:
    explicit ChildProcess(const std::string& command) {
        int to_child[2], from_child[2];
        if (pipe(to_child) != 0 || pipe(from_child) != 0)
            throw Error("cannot create pipes: " + std::string(std::strerror(errno)));
        pid_ = fork();
        if (pid_ < 0) throw Error("fork failed: " + std::string(std::strerror(errno)));
        if (pid_ == 0) {
            dup2(to_child[0], STDIN_FILENO);
            dup2(from_child[1], STDOUT_FILENO);
            close(to_child[0]);
            close(to_child[1]);
            close(from_child[0]);
            close(from_child[1]);
            execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
            std::perror("exec");
            _exit(127);
        }
        close(to_child[0]);
        close(from_child[1]);
        in_fd_ = from_child[0];
        out_fd_ = to_child[1];
    }

    ~ChildProcess() {
        if (out_fd_ >= 0) close(out_fd_);
        if (in_fd_ >= 0) close(in_fd_);
        if (pid_ > 0) waitpid(pid_, nullptr, 0);
    }

    void write_line(const std::string& line) {
        std::string buf = line + "\n";
        std::size_t off = 0;
        while (off < buf.size()) {
            ssize_t n = write(out_fd_, buf.data() + off, buf.size() - off);
            if (n < 0) {
                if (errno == EINTR) continue;
                throw Error("write to subprocess model failed: " +
                            std::string(std::strerror(errno)));
            }
            off += static_cast<std::size_t>(n);
        }
    }

    // Reads one '\n'-terminated line; throws on EOF.
    std::string read_line() {
        std::string line;
        while (true) {
            auto nl = buffer_.find('\n');
            if (nl != std::string::npos) {
                line = buffer_.substr(0, nl);
                buffer_.erase(0, nl + 1);
                return line;
            }
            char chunk[4096];
            ssize_t n = read(in_fd_, chunk, sizeof chunk);
            if (n < 0) {
                if (errno == EINTR) continue;
                throw Error("read from subprocess model failed: " +
                            std::string(std::strerror(errno)));
            }
            if (n == 0) throw Error("subprocess model closed its output unexpectedly");
            buffer_.append(chunk, static_cast<std::size_t>(n));
        }
    }

private:
    pid_t pid_ = -1;
    int in_fd_ = -1, out_fd_ = -1;
    std::string buffer_;
};

class SubprocessModel final : public Model {
public:
    SubprocessModel(const std::string& command, const LanguageSpec& lang)
        : command_(command), lang_(lang), child_(command) {}

    int vocab_size() const override { return lang_.vocabulary.size(); }
    std::string name() const override { return "subprocess:" + command_; }

    void run(const FramedSequence& framed, ProbMatrix& out) override {
        const Vocabulary& vocab = lang_.vocabulary;
        std::string line;
        line.reserve(framed.steps());
        for (int idx : framed.inputs) line.push_back(vocab.symbol(idx));
        child_.write_line(line);

        out.resize(framed.steps(), vocab.size());
        for (std::size_t t = 0; t < framed.steps(); ++t) {
            std::string response = child_.read_line();
            double* row = out.row(t);
            const char* cursor = response.c_str();
            for (int i = 0; i < vocab.size(); ++i) {
                char* end = nullptr;
                row[i] = std::strtod(cursor, &end);
                if (end == cursor)
                    throw Error("subprocess model emitted a malformed probability line: '" +
                                response + "'");
                cursor = end;
                while (*cursor == '\t' || *cursor == ' ') ++cursor;
            }
        }
    }

private:
    std::string command_;
    LanguageSpec lang_;
    ChildProcess child_;
};

}  // namespace

std::unique_ptr<Model> make_subprocess_model(const std::string& command,
                                             const LanguageSpec& lang) {
    return std::make_unique<SubprocessModel>(command, lang);
}

void serve_model_stdio(Model& model, const LanguageSpec& lang, std::istream& in,
                       std::ostream& out) {
    const Vocabulary& vocab = lang.vocabulary;
    std::string line;
    ProbMatrix probs;
    char buf[32];
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] != Vocabulary::kFraming)
            throw Error("protocol error: sequence must start with the framing symbol");
        FramedSequence framed = frame(vocab, std::string_view(line).substr(1));
        model.run(framed, probs);
        std::string block;
        for (std::size_t t = 0; t < probs.steps(); ++t) {
            const double* row = probs.row(t);
            for (int i = 0; i < vocab.size(); ++i) {
                std::snprintf(buf, sizeof buf, "%.17g", row[i]);
                if (i) block += '\t';
                block += buf;
            }
            block += '\n';
        }
        out << block << std::flush;
    }
}

}  // namespace langbench
