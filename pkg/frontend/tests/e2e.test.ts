// End-to-end behavior of the chat UI at the DOM level, driven through the
// real client code. Runs against the mock transport (serving bodies captured
// from the replay-backed service) by default, or against a really running
// service when ZEROTOD_SERVICE_URL is set.

import { beforeEach, describe, expect, it } from "vitest";

import { LIVE_URL, bootApp, bubbles, panel, settle, type Harness } from "./helpers.js";

beforeEach(() => {
  window.localStorage.clear();
});

describe("web chat end to end", () => {
  it("sending a message renders user and system bubbles", async () => {
    const harness = await bootApp();
    await harness.app.send("any indian restaurants?");
    await settle();

    const rendered = bubbles();
    expect(rendered).toHaveLength(2);
    expect(rendered[0].dataset.speaker).toBe("USER");
    expect(rendered[0].textContent).toContain("any indian restaurants?");
    expect(rendered[1].dataset.speaker).toBe("SYSTEM");
    expect(rendered[1].querySelector(".bubble-text")?.textContent?.length).toBeGreaterThan(0);
  });

  it("form submit path: empty input keeps send disabled, text enables it", async () => {
    await bootApp();
    const input = document.getElementById("message-input") as HTMLInputElement;
    const send = document.getElementById("send-button") as HTMLButtonElement;
    expect(send.disabled).toBe(true);
    input.value = "hello there";
    input.dispatchEvent(new Event("input", { bubbles: true }));
    expect(send.disabled).toBe(false);
    input.value = "   ";
    input.dispatchEvent(new Event("input", { bubbles: true }));
    expect(send.disabled).toBe(true);
  });

  it("trace inspector shows proxy belief state and one FULFILLED round card", async () => {
    const harness = await bootApp();
    await harness.app.send("any indian restaurants?");
    await settle();
    await harness.app.inspect(0);
    await settle();

    const proxy = panel().querySelector(".trace-proxy");
    expect(proxy?.querySelector("h3")?.textContent).toBe("Proxy Belief State");
    expect(proxy?.querySelector(".proxy-text")?.textContent?.length).toBeGreaterThan(0);

    const cards = panel().querySelectorAll(".round-card");
    expect(cards).toHaveLength(1);
    expect(cards[0].className).toContain("verdict-fulfilled");
    expect(cards[0].querySelector(".round-rows")?.textContent?.length).toBeGreaterThan(0);

    const sections = [...panel().querySelectorAll("section")].map((s) => s.className);
    expect(sections[0]).toBe("trace-proxy");
    expect(sections[sections.length - 2]).toBe("trace-outcome");
    expect(sections[sections.length - 1]).toBe("trace-response");
  });

  it("raw-JSON toggle matches the API body byte-for-byte", async () => {
    const harness = await bootApp();
    await harness.app.send("any indian restaurants?");
    await settle();
    await harness.app.inspect(0);
    await settle();

    // fetch the same body independently of the UI path
    const sessionId = harness.app.view().sessionId as string;
    const direct = await harness.api.fetchTrace(sessionId, 0);

    (panel().querySelector(".raw-toggle") as HTMLButtonElement).click();
    await settle();
    const shown = panel().querySelector(".trace-raw")?.textContent ?? "";
    expect(shown).toBe(direct.raw);
    expect(JSON.parse(shown)).toEqual(direct.trace);
  });

  it("reload restores the transcript from the server", async () => {
    const harness = await bootApp();
    await harness.app.send("any indian restaurants?");
    await settle();
    const before = bubbles().map((b) => b.querySelector(".bubble-text")?.textContent);
    expect(before).toHaveLength(2);

    // simulate reload: fresh DOM, fresh mount, same localStorage and server
    const again = await bootApp(harness);
    await settle();
    const after = bubbles().map((b) => b.querySelector(".bubble-text")?.textContent);
    expect(after).toEqual(before);
    expect(again.app.view().sessionId).toBe(harness.app.view().sessionId);
  });

  it("missing trace renders a placeholder with refresh", async () => {
    const harness = await bootApp();
    await harness.app.inspect(7);
    await settle();
    expect(panel().querySelector(".trace-missing")).not.toBeNull();
    expect(panel().querySelector(".refresh")).not.toBeNull();
  });
});

describe.skipIf(LIVE_URL !== "")("mock-transport-only behaviors", () => {
  it("409 re-enables input with a still-processing notice", async () => {
    const harness = await bootApp();
    const mock = harness.mock!;
    mock.busy = true;
    await harness.app.send("first message");
    await settle();

    expect(document.querySelector(".notice")?.textContent).toMatch(/still processing/);
    const input = document.getElementById("message-input") as HTMLInputElement;
    expect(input.disabled).toBe(false);
    expect(bubbles()).toHaveLength(0);

    mock.busy = false;
    await harness.app.send("second try");
    await settle();
    expect(bubbles()).toHaveLength(2);
  });

  it("network failure shows an inline error with a retry affordance", async () => {
    const harness = await bootApp();
    const mock = harness.mock!;
    mock.failNetwork = true;
    await harness.app.send("hello?");
    await settle();

    const failed = bubbles();
    expect(failed).toHaveLength(1);
    expect(failed[0].className).toContain("failed");
    const retry = failed[0].querySelector(".retry") as HTMLButtonElement;
    expect(retry).not.toBeNull();

    mock.failNetwork = false;
    retry.click();
    await settle();
    expect(bubbles()).toHaveLength(2);
    expect(bubbles()[1].dataset.speaker).toBe("SYSTEM");
  });
});
