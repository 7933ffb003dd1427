// Recorded API session (regenerate with scripts/record_console_fixtures.py
// from the repository root). Tests compare rendered output against these
// exact payloads.

import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

const here = dirname(fileURLToPath(import.meta.url));

export function loadFixture<T>(name: string): T {
  return JSON.parse(
    readFileSync(join(here, "fixtures", `${name}.json`), "utf-8"),
  ) as T;
}
