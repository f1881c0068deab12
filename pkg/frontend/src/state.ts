// Lineup state: slots, server-authoritative totals, undo stack, and the
// latest-wins compare queue. No profile math happens here — every number
// shown comes from a service response.

import { ServiceClient } from "./api.js";
import {
  ApiError,
  CompareGap,
  LineupEntry,
  MovementTotals,
  OfflineError,
  Template,
  TemplateSlot,
} from "./types.js";

export interface UiSlot extends TemplateSlot {
  player: string | null;
}

interface Snapshot {
  players: (string | null)[];
  totals: MovementTotals | null;
  deltas: MovementTotals | null;
}

export interface InlineError {
  message: string;
  gaps: CompareGap[];
}

const GOALKEEPER_SLOT: TemplateSlot = {
  label: "GK",
  role: "goalkeeper",
  side: "C",
  x: 6,
  y: 34,
};

export class LineupStore {
  slots: UiSlot[] = [];
  totals: MovementTotals | null = null;
  deltas: MovementTotals | null = null;
  error: InlineError | null = null;
  offline = false;
  templateName = "";

  private history: Snapshot[] = [];
  private pendingToken = 0;
  private lastAction: (() => Promise<void>) | null = null;
  private listeners: (() => void)[] = [];

  constructor(private client: ServiceClient) {}

  onChange(fn: () => void): void {
    this.listeners.push(fn);
  }

  private notify(): void {
    for (const fn of this.listeners) fn();
  }

  setFormation(template: Template): void {
    this.templateName = template.name;
    this.slots = [...template.slots, GOALKEEPER_SLOT].map((s) => ({
      ...s,
      player: null,
    }));
    this.totals = null;
    this.deltas = null;
    this.history = [];
    this.error = null;
    this.notify();
  }

  get undoDepth(): number {
    return this.history.length;
  }

  isComplete(): boolean {
    return this.slots.length > 0 && this.slots.every((s) => s.player !== null);
  }

  lineupEntries(players?: (string | null)[]): LineupEntry[] {
    const src = players ?? this.slots.map((s) => s.player);
    return this.slots.map((slot, i) => ({
      player: src[i] as string,
      role: slot.role,
    }));
  }

  usedBy(player: string): number {
    return this.slots.findIndex((s) => s.player === player);
  }

  private snapshot(): Snapshot {
    return {
      players: this.slots.map((s) => s.player),
      totals: this.totals,
      deltas: this.deltas,
    };
  }

  private restore(snap: Snapshot): void {
    this.slots.forEach((s, i) => {
      s.player = snap.players[i] ?? null;
    });
    this.totals = snap.totals;
    this.deltas = snap.deltas;
  }

  async setPlayer(slotIndex: number, player: string | null): Promise<void> {
    const slot = this.slots[slotIndex];
    if (!slot) throw new Error(`no slot ${slotIndex}`);
    if (player !== null) {
      const existing = this.usedBy(player);
      if (existing >= 0 && existing !== slotIndex) {
        this.error = {
          message: `${player} is already in the lineup (${this.slots[existing]?.label})`,
          gaps: [],
        };
        this.notify();
        return;
      }
    }
    const prev = this.snapshot();
    slot.player = player;
    this.error = null;

    if (!this.isComplete()) {
      this.history.push(prev);
      this.totals = null;
      this.deltas = null;
      this.notify();
      return;
    }

    // baseline: the previous lineup when it was complete, else the candidate
    // itself (first full lineup compares against itself, deltas all zero)
    const baselineComplete = prev.players.every((p) => p !== null);
    const baseline = baselineComplete
      ? this.lineupEntries(prev.players)
      : this.lineupEntries();
    const candidate = this.lineupEntries();

    const run = async (): Promise<void> => {
      const token = ++this.pendingToken;
      try {
        const resp = await this.client.compare(baseline, candidate);
        if (token !== this.pendingToken) return; // a newer compare won
        this.totals = resp.totals_b;
        this.deltas = resp.deltas;
        this.offline = false;
        this.history.push(prev);
      } catch (err) {
        if (token !== this.pendingToken) return;
        this.restore(prev); // the swap was not accepted
        if (err instanceof ApiError) {
          this.error = { message: err.message, gaps: err.gaps };
        } else if (err instanceof OfflineError) {
          this.offline = true;
          this.lastAction = run;
        } else {
          throw err;
        }
      }
      this.notify();
    };
    this.lastAction = null;
    await run();
  }

  undo(): void {
    const snap = this.history.pop();
    if (!snap) return;
    this.pendingToken++; // cancel any in-flight compare
    this.restore(snap);
    this.error = null;
    this.notify();
  }

  async retry(): Promise<void> {
    const action = this.lastAction;
    this.lastAction = null;
    if (action) await action();
  }
}
