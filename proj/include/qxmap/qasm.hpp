#pragma once

#include <cctype>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "qxmap/circuit.hpp"
#include "qxmap/errors.hpp"

namespace qxmap {

struct ParsedQasm {
    QuantumCircuit circuit;
    // One entry per dropped barrier/measure statement ("line N: ... dropped").
    std::vector<std::string> warnings;
};

namespace detail {

enum class TokKind { Ident, Number, String, Punct, End };

struct Token {
    TokKind kind = TokKind::End;
    std::string text;
    int line = 1;
    int col = 1;
};

class QasmLexer {
public:
    explicit QasmLexer(std::string_view text) : text_(text) {}

    Token next() {
        skip_ws_and_comments();
        Token tok;
        tok.line = line_;
        tok.col = col_;
        if (pos_ >= text_.size()) {
            tok.kind = TokKind::End;
            return tok;
        }
        char c = text_[pos_];
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            tok.kind = TokKind::Ident;
            while (pos_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
                tok.text.push_back(advance());
            return tok;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            tok.kind = TokKind::Number;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
                tok.text.push_back(advance());
            if (pos_ < text_.size() && text_[pos_] == '.') {
                tok.text.push_back(advance());
                while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
                    tok.text.push_back(advance());
            }
            return tok;
        }
        if (c == '"') {
            tok.kind = TokKind::String;
            advance();
            while (pos_ < text_.size() && text_[pos_] != '"') tok.text.push_back(advance());
            if (pos_ >= text_.size()) throw ParseError("unterminated string", tok.line, tok.col);
            advance();
            return tok;
        }
        tok.kind = TokKind::Punct;
        tok.text.push_back(advance());
        return tok;
    }

private:
    char advance() {
        char c = text_[pos_++];
        if (c == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        return c;
    }

    void skip_ws_and_comments() {
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else if (c == '/' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '/') {
                while (pos_ < text_.size() && text_[pos_] != '\n') advance();
            } else {
                break;
            }
        }
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
};

inline const std::unordered_map<std::string, SingleKind>& single_gate_names() {
    static const std::unordered_map<std::string, SingleKind> names = {
        {"h", SingleKind::H},   {"t", SingleKind::T},   {"tdg", SingleKind::Tdg},
        {"s", SingleKind::S},   {"sdg", SingleKind::Sdg}, {"x", SingleKind::X},
        {"y", SingleKind::Y},   {"z", SingleKind::Z},
    };
    return names;
}

}  // namespace detail

// Parses the OpenQASM 2.0 subset used here: an optional "OPENQASM 2.0;"
// header, an optional include, exactly one qreg, optional cregs (ignored),
// cx/whitelisted single-qubit statements, and barrier/measure statements
// which are dropped with a warning. Anything else is a hard error.
inline ParsedQasm parse_qasm(std::string_view text) {
    detail::QasmLexer lex(text);
    ParsedQasm result;

    std::optional<std::string> qreg_name;
    int qreg_size = 0;

    detail::Token tok = lex.next();

    auto expect_punct = [&](char c) {
        if (tok.kind != detail::TokKind::Punct || tok.text[0] != c)
            throw ParseError(std::string("expected '") + c + "'", tok.line, tok.col);
        tok = lex.next();
    };
    auto expect_semicolon = [&] { expect_punct(';'); };

    // Parses "<reg>[<index>]" and returns the index.
    auto parse_operand = [&]() -> int {
        if (tok.kind != detail::TokKind::Ident)
            throw ParseError("expected a register operand", tok.line, tok.col);
        if (!qreg_name)
            throw ParseError("gate statement before qreg declaration", tok.line, tok.col);
        if (tok.text != *qreg_name)
            throw ParseError("unknown register '" + tok.text + "'", tok.line, tok.col);
        tok = lex.next();
        expect_punct('[');
        if (tok.kind != detail::TokKind::Number)
            throw ParseError("expected a qubit index", tok.line, tok.col);
        int line = tok.line, col = tok.col;
        int index = std::stoi(tok.text);
        tok = lex.next();
        expect_punct(']');
        if (index < 0 || index >= qreg_size)
            throw ParseError("qubit index " + std::to_string(index) + " out of range", line, col);
        return index;
    };

    auto skip_statement = [&] {
        while (tok.kind != detail::TokKind::End &&
               !(tok.kind == detail::TokKind::Punct && tok.text[0] == ';'))
            tok = lex.next();
        if (tok.kind == detail::TokKind::End)
            throw ParseError("unterminated statement", tok.line, tok.col);
        tok = lex.next();
    };

    while (tok.kind != detail::TokKind::End) {
        if (tok.kind != detail::TokKind::Ident)
            throw ParseError("unexpected token '" + tok.text + "'", tok.line, tok.col);
        const std::string kw = tok.text;
        const int kw_line = tok.line, kw_col = tok.col;

        if (kw == "OPENQASM") {
            tok = lex.next();
            if (tok.kind != detail::TokKind::Number || tok.text != "2.0")
                throw ParseError("unsupported OPENQASM version", tok.line, tok.col);
            tok = lex.next();
            expect_semicolon();
        } else if (kw == "include") {
            tok = lex.next();
            if (tok.kind != detail::TokKind::String)
                throw ParseError("expected include file name", tok.line, tok.col);
            tok = lex.next();
            expect_semicolon();
        } else if (kw == "qreg") {
            tok = lex.next();
            if (tok.kind != detail::TokKind::Ident)
                throw ParseError("expected register name", tok.line, tok.col);
            if (qreg_name)
                throw ParseError("multiple quantum registers are not supported", kw_line, kw_col);
            std::string name = tok.text;
            tok = lex.next();
            expect_punct('[');
            if (tok.kind != detail::TokKind::Number)
                throw ParseError("expected register size", tok.line, tok.col);
            int size = std::stoi(tok.text);
            tok = lex.next();
            expect_punct(']');
            expect_semicolon();
            if (size <= 0) throw ParseError("register size must be positive", kw_line, kw_col);
            qreg_name = name;
            qreg_size = size;
            result.circuit.num_qubits = size;
        } else if (kw == "creg") {
            tok = lex.next();
            skip_statement();
        } else if (kw == "barrier" || kw == "measure") {
            tok = lex.next();
            skip_statement();
            result.warnings.push_back("line " + std::to_string(kw_line) + ": " + kw +
                                      " statement dropped");
        } else if (kw == "cx") {
            tok = lex.next();
            int control = parse_operand();
            expect_punct(',');
            int target = parse_operand();
            expect_semicolon();
            if (control == target)
                throw ParseError("cx control equals target", kw_line, kw_col);
            result.circuit.gates.emplace_back(CnotGate{control, target});
        } else if (auto it = detail::single_gate_names().find(kw);
                   it != detail::single_gate_names().end()) {
            tok = lex.next();
            int qubit = parse_operand();
            expect_semicolon();
            result.circuit.gates.emplace_back(SingleGate{qubit, it->second});
        } else {
            throw ParseError("unsupported gate or statement '" + kw + "'", kw_line, kw_col);
        }
    }

    if (!qreg_name) throw ParseError("no quantum register declared", 1, 1);
    return result;
}

}  // namespace qxmap
