/**
 * JSON parsing that remembers the exact source literal of every number.
 *
 * The dashboard must display probabilities digit-for-digit as the
 * service sent them. Re-serializing a parsed double can change the
 * digits (e.g. `1.0` becomes `1`, `4.54e-05` becomes `0.0000454`), so
 * rendering uses the original literal, looked up by JSON-pointer-style
 * path such as `/reports/0/p_exp`.
 */

export interface ParsedJson {
  value: unknown;
  /** JSON-pointer path -> exact number literal from the source text. */
  literals: Map<string, string>;
}

const WHITESPACE = new Set([" ", "\t", "\n", "\r"]);
const NUMBER_CHARS = new Set("-+0123456789.eE");

export function parseWithLiterals(text: string): ParsedJson {
  const literals = new Map<string, string>();
  let i = 0;

  function error(message: string): never {
    throw new SyntaxError(`${message} at offset ${i}`);
  }

  function skipWhitespace(): void {
    while (i < text.length && WHITESPACE.has(text[i])) i += 1;
  }

  function expectLiteral(word: string): void {
    if (text.startsWith(word, i)) {
      i += word.length;
      return;
    }
    error(`expected ${word}`);
  }

  function parseString(): string {
    const start = i;
    i += 1; // opening quote
    while (i < text.length) {
      if (text[i] === "\\") i += 2;
      else if (text[i] === '"') {
        i += 1;
        return JSON.parse(text.slice(start, i)) as string;
      } else i += 1;
    }
    error("unterminated string");
  }

  function parseNumber(path: string): number {
    const start = i;
    while (i < text.length && NUMBER_CHARS.has(text[i])) i += 1;
    const raw = text.slice(start, i);
    const value = Number(raw);
    if (raw.length === 0 || Number.isNaN(value)) error(`invalid number ${JSON.stringify(raw)}`);
    literals.set(path, raw);
    return value;
  }

  function parseArray(path: string): unknown[] {
    const out: unknown[] = [];
    i += 1; // [
    skipWhitespace();
    if (text[i] === "]") {
      i += 1;
      return out;
    }
    for (;;) {
      out.push(parseValue(`${path}/${out.length}`));
      skipWhitespace();
      if (text[i] === ",") {
        i += 1;
        continue;
      }
      if (text[i] === "]") {
        i += 1;
        return out;
      }
      error("expected , or ] in array");
    }
  }

  function parseObject(path: string): Record<string, unknown> {
    const out: Record<string, unknown> = {};
    i += 1; // {
    skipWhitespace();
    if (text[i] === "}") {
      i += 1;
      return out;
    }
    for (;;) {
      skipWhitespace();
      if (text[i] !== '"') error("expected object key");
      const key = parseString();
      skipWhitespace();
      if (text[i] !== ":") error("expected : after key");
      i += 1;
      out[key] = parseValue(`${path}/${escapePointer(key)}`);
      skipWhitespace();
      if (text[i] === ",") {
        i += 1;
        continue;
      }
      if (text[i] === "}") {
        i += 1;
        return out;
      }
      error("expected , or } in object");
    }
  }

  function parseValue(path: string): unknown {
    skipWhitespace();
    const c = text[i];
    if (c === "{") return parseObject(path);
    if (c === "[") return parseArray(path);
    if (c === '"') return parseString();
    if (c === "t") {
      expectLiteral("true");
      return true;
    }
    if (c === "f") {
      expectLiteral("false");
      return false;
    }
    if (c === "n") {
      expectLiteral("null");
      return null;
    }
    return parseNumber(path);
  }

  const value = parseValue("");
  skipWhitespace();
  if (i !== text.length) error("trailing content");
  return { value, literals };
}

function escapePointer(key: string): string {
  return key.replace(/~/g, "~0").replace(/\//g, "~1");
}

/** Exact source literal at a path, falling back to String(value). */
export function literalAt(parsed: ParsedJson, path: string, fallback: number): string {
  return parsed.literals.get(path) ?? String(fallback);
}
