import { afterEach, describe, expect, it, vi } from 'vitest'

import {
    ApiError,
    classifyUrl,
    fetchClassification,
    fetchExamples,
    orbitUrl,
    tileUrl,
} from '../src/api.js'

afterEach(() => {
    vi.unstubAllGlobals()
})

describe('url builders', () => {
    it('classify carries n, re, im and optional budget', () => {
        expect(classifyUrl('http://h', 3, { re: 0.16, im: 0 })).toBe(
            'http://h/api/classify?n=3&re=0.16&im=0',
        )
        expect(classifyUrl('', 3, { re: 0, im: -1 }, 2000)).toBe(
            '/api/classify?n=3&re=0&im=-1&budget=2000',
        )
    })

    it('orbit picks a seed and a trace cap', () => {
        expect(orbitUrl('', 3, { re: 0.16, im: 0 }, 'v1', 200)).toBe(
            '/api/orbit?n=3&re=0.16&im=0&seed=v1&max=200',
        )
    })

    it('tile urls follow the slippy scheme', () => {
        expect(tileUrl('http://h', 'param', 3, 2, 1, 3, null, 500)).toBe(
            'http://h/tiles/param/3/2/1/3.png?budget=500',
        )
        expect(tileUrl('', 'julia', 3, 0, 0, 0, { re: 0.25, im: 0 }, 64)).toBe(
            '/tiles/julia/3/0/0/0.png?budget=64&re=0.25&im=0',
        )
        expect(() => tileUrl('', 'julia', 3, 0, 0, 0, null, 64)).toThrow()
    })
})

describe('response handling', () => {
    it('parses a JSON body', async () => {
        vi.stubGlobal(
            'fetch',
            vi.fn(async () => new Response(JSON.stringify([{ name: 'x' }]), { status: 200 })),
        )
        const rows = await fetchExamples('')
        expect(rows).toEqual([{ name: 'x' }])
    })

    it('raises ApiError with the server detail on 4xx', async () => {
        vi.stubGlobal(
            'fetch',
            vi.fn(
                async () =>
                    new Response(
                        JSON.stringify({ error: 'bad_request', detail: 'lam must be nonzero' }),
                        { status: 400 },
                    ),
            ),
        )
        const err = await fetchClassification('', 3, { re: 0, im: 0 }).catch((e) => e)
        expect(err).toBeInstanceOf(ApiError)
        expect(err.status).toBe(400)
        expect(err.detail).toBe('lam must be nonzero')
    })

    it('keeps the status text when the error body is not JSON', async () => {
        vi.stubGlobal(
            'fetch',
            vi.fn(async () => new Response('boom', { status: 500, statusText: 'Internal' })),
        )
        const err = await fetchClassification('', 3, { re: 1, im: 0 }).catch((e) => e)
        expect(err).toBeInstanceOf(ApiError)
        expect(err.detail).toBe('Internal')
    })
})
