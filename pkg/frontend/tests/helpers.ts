import { readFileSync } from "node:fs";

import { ChatApi } from "../src/api.js";
import { mountApp, type AppHandles } from "../src/main.js";
import { MockService } from "./mockService.js";

// When ZEROTOD_SERVICE_URL is set the suite runs against a really running
// (replay-backed) service over HTTP instead of the mock transport.
export const LIVE_URL = process.env.ZEROTOD_SERVICE_URL ?? "";

export function loadMarkup(): void {
  const html = readFileSync("public/index.html", "utf-8");
  const body = html.split(/<body>/)[1].split(/<\/body>/)[0].replace(/<script[\s\S]*?<\/script>/, "");
  document.body.innerHTML = body;
}

export interface Harness {
  app: AppHandles;
  api: ChatApi;
  mock: MockService | null;
}

export async function bootApp(existing?: Harness): Promise<Harness> {
  loadMarkup();
  let mock = existing?.mock ?? null;
  let api = existing?.api;
  if (!api) {
    if (LIVE_URL) {
      api = new ChatApi(LIVE_URL);
    } else {
      mock = new MockService();
      mock.install();
      api = new ChatApi("http://mock.test");
    }
  }
  const app = mountApp(document, api);
  await app.ready;
  return { app, api, mock };
}

export async function settle(): Promise<void> {
  for (let i = 0; i < 4; i++) {
    await new Promise((resolve) => setTimeout(resolve, 0));
  }
}

export function bubbles(): HTMLElement[] {
  return [...document.querySelectorAll<HTMLElement>("#transcript .bubble")];
}

export function panel(): HTMLElement {
  return document.getElementById("trace-panel") as HTMLElement;
}
