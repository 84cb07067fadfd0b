// Keyboard state machine: one text buffer, one prediction strip.
//
// The buffer is the single source of truth; every request carries the
// buffer exactly as it was when the request was issued.  Requests get
// monotonically increasing ids and only the newest response is ever
// rendered, so a slow stale response can never overwrite a fresh one.
// While a request is in flight the strip is empty; selections arriving
// in that window are queued and applied against the fresh candidates.

import { Candidate, PredictResponse } from "./client.js";
import { debounce } from "./debounce.js";

/** The slice of the service client the keyboard actually uses. */
export interface PredictorApi {
  predict(context: string, n: number, modelId?: string): Promise<PredictResponse>;
}

export interface UiState {
  buffer: string;
  candidates: Candidate[];
  pendingRequest: boolean;
  modelId?: string;
  n: number;
  keystrokesTyped: number;
  keystrokesSaved: number;
  banner: string | null;
}

export function savingsRatio(state: Pick<UiState, "keystrokesTyped" | "keystrokesSaved">): number {
  const total = state.keystrokesTyped + state.keystrokesSaved;
  return total === 0 ? 0 : state.keystrokesSaved / total;
}

export interface ControllerOptions {
  n?: number;
  modelId?: string;
  debounceMs?: number;
  onChange?: (state: UiState) => void;
}

export class KeyboardController {
  readonly state: UiState;

  private requestCounter = 0;
  private latestRequestId = 0;
  private queuedSelections: number[] = [];
  private readonly requestSoon: ReturnType<typeof debounce<() => void>>;
  private readonly listeners: Array<(state: UiState) => void> = [];

  constructor(
    private readonly client: PredictorApi,
    options: ControllerOptions = {},
  ) {
    this.state = {
      buffer: "",
      candidates: [],
      pendingRequest: false,
      modelId: options.modelId,
      n: options.n ?? 3,
      keystrokesTyped: 0,
      keystrokesSaved: 0,
      banner: null,
    };
    if (options.onChange) {
      this.listeners.push(options.onChange);
    }
    this.requestSoon = debounce(() => this.issueRequest(), options.debounceMs ?? 50);
  }

  subscribe(listener: (state: UiState) => void): void {
    this.listeners.push(listener);
  }

  private onChange(state: UiState): void {
    for (const listener of this.listeners) {
      listener(state);
    }
  }

  /** Request predictions for the current buffer right away (e.g. on mount). */
  refresh(): void {
    this.requestSoon.flush();
  }

  keypress(ch: string): void {
    this.state.buffer += ch;
    this.state.keystrokesTyped += 1;
    this.clearStrip();
    this.requestSoon();
    this.onChange(this.state);
  }

  backspace(): void {
    if (this.state.buffer.length === 0) {
      return; // nothing to delete, nothing to re-request
    }
    this.state.buffer = this.state.buffer.slice(0, -1);
    this.state.keystrokesTyped += 1;
    this.clearStrip();
    this.requestSoon();
    this.onChange(this.state);
  }

  selectCandidate(index: number): void {
    if (this.state.pendingRequest) {
      this.queuedSelections.push(index);
      return;
    }
    this.applySelection(index);
  }

  private applySelection(index: number): void {
    const chosen = this.state.candidates[index];
    if (chosen === undefined) {
      return; // stale index after a refresh
    }
    this.state.buffer += chosen.display_text;
    this.state.keystrokesTyped += 1; // one touch, whatever the length
    this.state.keystrokesSaved += Math.max(0, chosen.display_text.length - 1);
    this.clearStrip();
    this.requestSoon.flush(); // the feedback loop re-requests immediately
    this.onChange(this.state);
  }

  private clearStrip(): void {
    this.state.candidates = [];
  }

  private issueRequest(): void {
    const id = ++this.requestCounter;
    this.latestRequestId = id;
    this.state.pendingRequest = true;
    this.state.candidates = [];
    this.onChange(this.state);
    const context = this.state.buffer;
    this.client.predict(context, this.state.n, this.state.modelId).then(
      (resp) => this.handleResponse(id, resp.candidates),
      (err) => this.handleError(id, err),
    );
  }

  private handleResponse(id: number, candidates: Candidate[]): void {
    if (id !== this.latestRequestId) {
      return; // stale: a newer request owns the strip
    }
    this.state.pendingRequest = false;
    this.state.banner = null;
    this.state.candidates = candidates.slice(0, this.state.n);
    this.onChange(this.state);
    const queued = this.queuedSelections;
    this.queuedSelections = [];
    for (const index of queued) {
      this.applySelection(index);
    }
  }

  private handleError(id: number, err: unknown): void {
    if (id !== this.latestRequestId) {
      return;
    }
    this.state.pendingRequest = false;
    this.state.banner = `predictions unavailable: ${String(err)}`;
    this.queuedSelections = [];
    this.onChange(this.state);
  }
}
