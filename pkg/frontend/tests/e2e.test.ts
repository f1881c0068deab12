// End-to-end spec against a live profile service (the Python acceptance
// suite starts one over the season fixture store and sets SERVICE_URL).

import { describe, expect, it } from "vitest";

import { HttpServiceClient } from "../src/api.js";
import { LineupStore } from "../src/state.js";

const BASE = process.env.SERVICE_URL;

describe.skipIf(!BASE)("lineup explorer against the fixture store", () => {
  async function filledStore(): Promise<LineupStore> {
    const client = new HttpServiceClient(BASE!);
    const config = await client.config();
    const tpl = config.templates.find((t) => t.name === "4-3-3")!;
    const store = new LineupStore(client);
    store.setFormation(tpl);
    const byRole: Record<string, string[]> = {
      full_back: ["fb1", "fb2"],
      central_defender: ["cb1", "cb2"],
      defensive_midfielder: ["dm1"],
      midfielder: ["p0", "p1"],
      winger: ["w1", "w2"],
      striker: ["runner"],
      goalkeeper: ["gk1"],
    };
    for (let i = 0; i < store.slots.length; i++) {
      const nextPlayer = byRole[store.slots[i]!.role]!.shift()!;
      await store.setPlayer(i, nextPlayer);
    }
    return store;
  }

  it("swap moves the total by exactly the served per-30 difference", async () => {
    const client = new HttpServiceClient(BASE!);
    const store = await filledStore();
    expect(store.totals).not.toBeNull();
    const before = store.totals!["inside_to_back"]!;
    const slotSt = store.slots.findIndex((s) => s.role === "striker");

    const runner = await client.profile("runner", "striker");
    const statue = await client.profile("statue", "striker");
    const diff =
      Number(statue["mt_inside_to_back_per30"]) - Number(runner["mt_inside_to_back_per30"]);

    await store.setPlayer(slotSt, "statue");
    expect(store.totals!["inside_to_back"]! - before).toBeCloseTo(diff, 12);
    expect(store.deltas!["inside_to_back"]).toBeCloseTo(diff, 12);
  });

  it("N swaps + N undos restore the initial totals", async () => {
    const store = await filledStore();
    const initialTotals = { ...store.totals! };
    const initialPlayers = store.slots.map((s) => s.player);
    const slotSt = store.slots.findIndex((s) => s.role === "striker");
    const slotW = store.slots.findIndex((s) => s.role === "winger");
    await store.setPlayer(slotSt, "s4");
    await store.setPlayer(slotW, "w3");
    store.undo();
    store.undo();
    expect(store.slots.map((s) => s.player)).toEqual(initialPlayers);
    expect(store.totals).toEqual(initialTotals);
  });

  it("unqualified players surface the served 422 gap list inline", async () => {
    const store = await filledStore();
    const slotSt = store.slots.findIndex((s) => s.role === "striker");
    await store.setPlayer(slotSt, "benchkid");
    expect(store.error).not.toBeNull();
    expect(store.error!.gaps).toContainEqual({
      player: "benchkid",
      role: "striker",
      reason: "below the qualifying minutes",
    });
    expect(store.slots[slotSt]!.player).toBe("runner");
  });
});
