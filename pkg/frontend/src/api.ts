import type { Point } from './geometry.js'

export interface OrbitPayload {
    n: number
    re: number
    im: number
    seed: Point | null
    outcome: string
    steps: number
    final: Point | null
    trace: (Point | null)[]
}

export interface ClassifyPayload {
    n: number
    re: number
    im: number
    kind: string
    subcase: string
    budget_used: number
    evidence: {
        trap_active: boolean
        threshold: number
        v0_result: { outcome: string; steps: number }
        v1_result: { outcome: string; steps: number }
        warnings: string[]
    }
}

export interface ExampleRow {
    name: string
    n: number
    re: number
    im: number
    kind: string
    subcase: string
}

export class ApiError extends Error {
    constructor(
        readonly status: number,
        readonly detail: string,
    ) {
        super(`api error ${status}: ${detail}`)
    }
}

async function getJson<T>(url: string, signal?: AbortSignal): Promise<T> {
    const resp = await fetch(url, { signal })
    if (!resp.ok) {
        let detail = resp.statusText
        try {
            const body = (await resp.json()) as { detail?: string }
            if (body.detail) detail = body.detail
        } catch {
            // non-JSON error body; keep the status text
        }
        throw new ApiError(resp.status, detail)
    }
    return (await resp.json()) as T
}

export function classifyUrl(base: string, n: number, lam: Point, budget?: number): string {
    const q = new URLSearchParams({ n: String(n), re: String(lam.re), im: String(lam.im) })
    if (budget !== undefined) q.set('budget', String(budget))
    return `${base}/api/classify?${q}`
}

export function orbitUrl(base: string, n: number, lam: Point, seed: 'v0' | 'v1', max: number): string {
    const q = new URLSearchParams({
        n: String(n),
        re: String(lam.re),
        im: String(lam.im),
        seed,
        max: String(max),
    })
    return `${base}/api/orbit?${q}`
}

export function tileUrl(
    base: string,
    plane: 'param' | 'julia',
    n: number,
    zoom: number,
    tx: number,
    ty: number,
    lam: Point | null,
    budget: number,
): string {
    const q = new URLSearchParams({ budget: String(budget) })
    if (plane === 'julia') {
        if (!lam) throw new Error('julia tiles need a parameter')
        q.set('re', String(lam.re))
        q.set('im', String(lam.im))
    }
    return `${base}/tiles/${plane}/${n}/${zoom}/${tx}/${ty}.png?${q}`
}

export function fetchClassification(
    base: string,
    n: number,
    lam: Point,
    budget?: number,
    signal?: AbortSignal,
): Promise<ClassifyPayload> {
    return getJson(classifyUrl(base, n, lam, budget), signal)
}

export function fetchOrbit(
    base: string,
    n: number,
    lam: Point,
    seed: 'v0' | 'v1',
    max: number,
    signal?: AbortSignal,
): Promise<OrbitPayload> {
    return getJson(orbitUrl(base, n, lam, seed, max), signal)
}

export function fetchExamples(base: string, signal?: AbortSignal): Promise<ExampleRow[]> {
    return getJson(`${base}/api/examples`, signal)
}
